// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_HARNESS_HPP
#define ELLIPSUM_HARNESS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ellipsum/errors.hpp"
#include "ellipsum/inversion.hpp"
#include "ellipsum/karlsson_minton.hpp"
#include "ellipsum/operator_method.hpp"
#include "ellipsum/pochhammer.hpp"
#include "ellipsum/rng.hpp"
#include "ellipsum/theta.hpp"

namespace ellipsum {

// Bounds for the integer shapes the samplers draw from.
struct shape_spec {
    int s_max = 3;
    int r_max = 3;
    int l_max = 3;
    int m_max = 4;
    int y_max = 3;
    int n_upper = 5;     // N bound where N is free
    int l_upper = 3;     // L bound where L is free
    int window_max = 8;  // inversion window size
    int list_max = 6;    // partial-fraction list length
};

struct sampler_config {
    std::uint64_t seed = 1;
    std::uint64_t trials = 100;
    std::vector<cplx> p_values{{0.0, 0.0}, {0.1, 0.0}, {0.5, 0.0}, {0.7, 0.0}};
    double r_min = 0.3;
    double r_max = 2.0;
    // magnitude band for sampled bases q*; kept nearer to 1 so that the
    // powers q^(.) appearing inside the identities stay in floating range
    double base_r_min = 0.65;
    double base_r_max = 1.4;
    double delta = default_zero_delta;
    int retry_cap = 200;
    shape_spec shape;
};

struct trial_report {
    std::string identity;
    std::uint64_t trial = 0;
    std::string shape;
    std::string params;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string reason;       // set when the trial errored instead of evaluating
    double wall_seconds = 0;  // human-format only; never serialized to structured output
};

// A sampled, delta-safe instance: evaluation is a pure closure over the
// sampled parameters.
struct instance {
    std::string identity;
    std::uint64_t trial = 0;
    std::string shape;
    std::string params;
    std::function<residual()> evaluate;
};

enum class report_format { human, structured };

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
inline std::string fmt(cplx v) { return "[" + fmt(v.real()) + "," + fmt(v.imag()) + "]"; }
inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

template <typename T>
std::string fmt_list(const std::vector<T>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += fmt(xs[i]);
    }
    return out + "]";
}

// key/value JSON object assembled in insertion order with fixed formatting
class params_builder {
  public:
    params_builder& add(const std::string& key, const std::string& rendered) {
        if (!body_.empty()) body_ += ",";
        body_ += "\"" + key + "\":" + rendered;
        return *this;
    }
    params_builder& add(const std::string& key, double v) { return add(key, fmt(v)); }
    params_builder& add(const std::string& key, cplx v) { return add(key, fmt(v)); }
    params_builder& add(const std::string& key, int v) { return add(key, fmt(v)); }
    template <typename T>
    params_builder& add_list(const std::string& key, const std::vector<T>& v) {
        return add(key, fmt_list(v));
    }
    std::string str() const { return "{" + body_ + "}"; }

  private:
    std::string body_;
};

struct resample_request {};

// run one sampling attempt repeatedly until it neither lands on the zero set
// nor degenerates, up to the retry cap
template <typename F>
instance with_retries(const sampler_config& cfg, const std::string& identity, F&& attempt) {
    for (int t = 0; t < cfg.retry_cap; ++t) {
        try {
            return attempt();
        } catch (const division_by_zero_theta&) {
        } catch (const degenerate_spectrum&) {
        } catch (const resample_request&) {
        }
    }
    throw unsampleable(identity + ": no admissible instance within the retry cap");
}

inline nome pick_nome(const sampler_config& cfg, std::uint64_t trial) {
    if (cfg.p_values.empty()) throw config_error("p_values must be nonempty");
    return nome(cfg.p_values[trial % cfg.p_values.size()]);
}

inline nome pick_nonzero_nome(const sampler_config& cfg, std::uint64_t trial) {
    std::vector<cplx> nz;
    for (cplx p : cfg.p_values)
        if (p != cplx{0.0, 0.0}) nz.push_back(p);
    if (nz.empty()) throw unsampleable("identity needs a nonzero nome");
    return nome(nz[trial % nz.size()]);
}

inline cplx sample_off_zeros(rng& r, const sampler_config& cfg, const nome& nm) {
    for (int t = 0; t < cfg.retry_cap; ++t) {
        const cplx x = r.next_annulus(cfg.r_min, cfg.r_max);
        if (!near_theta_zero(x, nm, cfg.delta)) return x;
    }
    throw unsampleable("annulus saturated by the delta-exclusion zone");
}

inline refined_base sample_base(rng& r, const sampler_config& cfg, const nome& nm, int y_lcm) {
    return refined_base(r.next_annulus(cfg.base_r_min, cfg.base_r_max), y_lcm, nm);
}

// residuals that came out non-finite mean the instance strayed outside
// floating range; treat like a zero-set hit and resample
inline residual checked(const residual& r) {
    if (!std::isfinite(r.relative)) throw resample_request{};
    return r;
}

// random composition of `total` into `parts` summands each within [0, cap]
inline std::vector<int> compose(rng& r, int total, int parts, int cap) {
    if (parts * cap < total || total < 0) throw resample_request{};
    std::vector<int> out(static_cast<std::size_t>(parts), 0);
    int remaining = total;
    for (int j = 0; j < parts; ++j) {
        const int left_cap = (parts - 1 - j) * cap;
        const int lo = std::max(0, remaining - left_cap);
        const int hi = std::min(cap, remaining);
        const int v = (j + 1 == parts) ? remaining : r.next_int(lo, hi);
        out[static_cast<std::size_t>(j)] = v;
        remaining -= v;
    }
    if (remaining != 0) throw resample_request{};
    return out;
}

inline int lcm_of(const std::vector<int>& ys) {
    int l = 1;
    for (int y : ys) l = std::lcm(l, y);
    return l;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Per-identity samplers
// ---------------------------------------------------------------------------

namespace samplers {

inline instance theta_inversion(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "theta_inversion", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "theta_inversion", [&] {
        const cplx x = detail::sample_off_zeros(r, cfg, nm);
        detail::checked(residual_inversion(x, nm));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("x", x);
        return instance{"theta_inversion", trial, "x", pb.str(),
                        [x, nm] { return residual_inversion(x, nm); }};
    });
}

inline instance theta_quasiperiod(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "theta_quasiperiod", trial);
    const nome nm = detail::pick_nonzero_nome(cfg, trial);
    return detail::with_retries(cfg, "theta_quasiperiod", [&] {
        const cplx x = detail::sample_off_zeros(r, cfg, nm);
        detail::checked(residual_quasiperiod(x, nm));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("x", x);
        return instance{"theta_quasiperiod", trial, "x", pb.str(),
                        [x, nm] { return residual_quasiperiod(x, nm); }};
    });
}

inline instance theta_addition(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "theta_addition", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "theta_addition", [&] {
        const cplx x = detail::sample_off_zeros(r, cfg, nm);
        const cplx y = detail::sample_off_zeros(r, cfg, nm);
        const cplx u = detail::sample_off_zeros(r, cfg, nm);
        const cplx v = detail::sample_off_zeros(r, cfg, nm);
        detail::checked(residual_addition(x, y, u, v, nm));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("x", x).add("y", y).add("u", u).add("v", v);
        return instance{"theta_addition", trial, "x,y,u,v", pb.str(),
                        [=] { return residual_addition(x, y, u, v, nm); }};
    });
}

inline instance epdi(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "epdi", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "epdi", [&] {
        const refined_base base = detail::sample_base(r, cfg, nm, 1);
        const cplx a = r.next_annulus(cfg.r_min, cfg.r_max);
        const cplx b = r.next_annulus(cfg.r_min, cfg.r_max);
        const int n = r.next_int(1, cfg.shape.list_max);
        const int k = r.next_int(0, n);
        detail::checked(residual_epdi(a, b, n, k, base, cfg.delta));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("q", base.q()).add("a", a).add("b", b).add("n", n).add("k", k);
        const double delta = cfg.delta;
        return instance{"epdi", trial, "n=" + std::to_string(n) + ",k=" + std::to_string(k),
                        pb.str(), [=] { return residual_epdi(a, b, n, k, base, delta); }};
    });
}

inline instance epi(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "epi", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "epi", [&] {
        const refined_base base = detail::sample_base(r, cfg, nm, 1);
        const cplx a = r.next_annulus(cfg.r_min, cfg.r_max);
        const cplx b = r.next_annulus(cfg.r_min, cfg.r_max);
        const int n = r.next_int(0, cfg.shape.list_max);
        detail::checked(residual_epi(a, b, n, base, cfg.delta));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("q", base.q()).add("a", a).add("b", b).add("n", n);
        const double delta = cfg.delta;
        return instance{"epi", trial, "n=" + std::to_string(n), pb.str(),
                        [=] { return residual_epi(a, b, n, base, delta); }};
    });
}

inline instance xsk(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "xsk", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "xsk", [&] {
        const refined_base base = detail::sample_base(r, cfg, nm, 1);
        const cplx x = r.next_annulus(cfg.r_min, cfg.r_max);
        const int s = r.next_int(1, cfg.shape.s_max);
        const int k = r.next_int(0, cfg.shape.l_max);
        detail::checked(residual_xsk(x, s, k, base, cfg.delta));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("q", base.q()).add("x", x).add("s", s).add("k", k);
        const double delta = cfg.delta;
        return instance{"xsk", trial, "s=" + std::to_string(s) + ",k=" + std::to_string(k),
                        pb.str(), [=] { return residual_xsk(x, s, k, base, delta); }};
    });
}

namespace detail_seq {

inline sequence_pair sample_sequence(rng& r, const sampler_config& cfg, const nome& nm, int size) {
    std::vector<cplx> a, c;
    for (int j = 0; j < size; ++j) {
        a.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        c.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
    }
    return sequence_pair(0, std::move(a), std::move(c), nm, cfg.delta);
}

inline std::string seq_params(const sequence_pair& seq) {
    std::vector<cplx> a, c;
    for (int j = seq.j_min(); j <= seq.j_max(); ++j) {
        a.push_back(seq.a(j));
        c.push_back(seq.c(j));
    }
    detail::params_builder pb;
    pb.add("p", seq.base_nome().p()).add_list("a", a).add_list("c", c);
    return pb.str();
}

} // namespace detail_seq

inline instance wmi(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "wmi", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "wmi", [&] {
        const int w = r.next_int(2, cfg.shape.window_max);
        const sequence_pair seq = detail_seq::sample_sequence(r, cfg, nm, w);
        detail::checked(orthogonality_residual(seq, 0, w - 1, orthogonality::wmi));
        return instance{"wmi", trial, "window=" + std::to_string(w),
                        detail_seq::seq_params(seq), [seq, w] {
                            return orthogonality_residual(seq, 0, w - 1, orthogonality::wmi);
                        }};
    });
}

inline instance pmi(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "pmi", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "pmi", [&] {
        const int w = r.next_int(2, cfg.shape.window_max);
        const sequence_pair seq = detail_seq::sample_sequence(r, cfg, nm, w);
        detail::checked(orthogonality_residual(seq, 0, w - 1, orthogonality::pmi));
        return instance{"pmi", trial, "window=" + std::to_string(w),
                        detail_seq::seq_params(seq), [seq, w] {
                            return orthogonality_residual(seq, 0, w - 1, orthogonality::pmi);
                        }};
    });
}

inline instance dpf(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "dpf", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "dpf", [&] {
        const int n = r.next_int(2, cfg.shape.list_max);
        std::vector<cplx> a, b;
        for (int j = 0; j < n; ++j) a.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        for (int j = 0; j + 2 < n; ++j) b.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        detail::checked(gustafson_residual(a, b, nm, cfg.delta));
        detail::params_builder pb;
        pb.add("p", nm.p()).add_list("a", a).add_list("b", b);
        const double delta = cfg.delta;
        return instance{"dpf", trial, "n=" + std::to_string(n), pb.str(),
                        [=] { return gustafson_residual(a, b, nm, delta); }};
    });
}

inline instance mipf(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "mipf", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "mipf", [&] {
        const int w = r.next_int(2, cfg.shape.window_max);
        const sequence_pair seq = detail_seq::sample_sequence(r, cfg, nm, w);
        detail::checked(mipf_residual(seq, 0, w - 1));
        return instance{"mipf", trial, "window=" + std::to_string(w),
                        detail_seq::seq_params(seq),
                        [seq, w] { return mipf_residual(seq, 0, w - 1); }};
    });
}

inline instance apf(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "apf", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "apf", [&] {
        const int n = r.next_int(2, cfg.shape.list_max);
        std::vector<cplx> a, b;
        cplx pa = 1.0, pb_ = 1.0;
        for (int j = 0; j < n; ++j) {
            a.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
            pa *= a.back();
        }
        for (int j = 0; j + 1 < n; ++j) {
            b.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
            pb_ *= b.back();
        }
        b.push_back(pa / pb_); // product condition solved for the last pole
        detail::checked(tannery_molk_residual(a, b, nm, cfg.delta));
        detail::params_builder pb;
        pb.add("p", nm.p()).add_list("a", a).add_list("b", b);
        const double delta = cfg.delta;
        return instance{"apf", trial, "n=" + std::to_string(n), pb.str(),
                        [=] { return tannery_molk_residual(a, b, nm, delta); }};
    });
}

namespace detail_op {

// sequence window plus multiplier variables for the operator checks
inline operator_context sample_context(rng& r, const sampler_config& cfg, const nome& nm,
                                       int size) {
    const sequence_pair seq = detail_seq::sample_sequence(r, cfg, nm, size);
    const cplx u = r.next_annulus(0.5, 1.5);
    const cplx v = r.next_annulus(0.5, 1.5);
    return operator_context(seq, u, v);
}

inline std::string ctx_params(const operator_context& ctx, int k) {
    std::vector<cplx> a, c;
    for (int j = ctx.seq().j_min(); j <= ctx.seq().j_max(); ++j) {
        a.push_back(ctx.seq().a(j));
        c.push_back(ctx.seq().c(j));
    }
    detail::params_builder pb;
    pb.add("p", ctx.seq().base_nome().p())
        .add_list("a", a)
        .add_list("c", c)
        .add("u", ctx.u())
        .add("v", ctx.v())
        .add("k", k);
    return pb.str();
}

} // namespace detail_op

inline instance column_recurrence(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "column_recurrence", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "column_recurrence", [&] {
        const int w = r.next_int(4, cfg.shape.window_max);
        const operator_context ctx = detail_op::sample_context(r, cfg, nm, w);
        const int k = r.next_int(0, w - 2);
        detail::checked(column_recurrence_residual(ctx, k, k + 1, w - 1));
        return instance{"column_recurrence", trial, "window=" + std::to_string(w),
                        detail_op::ctx_params(ctx, k), [ctx, k, w] {
                            return column_recurrence_residual(ctx, k, k + 1, w - 1);
                        }};
    });
}

inline instance functional_eq(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "functional_eq", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "functional_eq", [&] {
        const int w = r.next_int(5, cfg.shape.window_max);
        const operator_context ctx = detail_op::sample_context(r, cfg, nm, w);
        const int k = r.next_int(2, w - 2);
        detail::checked(functional_eq_residual(ctx, k));
        return instance{"functional_eq", trial, "window=" + std::to_string(w),
                        detail_op::ctx_params(ctx, k),
                        [ctx, k] { return functional_eq_residual(ctx, k); }};
    });
}

inline instance dual_eq(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "dual_eq", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "dual_eq", [&] {
        const int w = r.next_int(5, cfg.shape.window_max);
        const operator_context ctx = detail_op::sample_context(r, cfg, nm, w);
        const int k = r.next_int(2, w - 3);
        detail::checked(dual_eq_residual(ctx, k, 1));
        return instance{"dual_eq", trial, "window=" + std::to_string(w),
                        detail_op::ctx_params(ctx, k),
                        [ctx, k] { return dual_eq_residual(ctx, k, 1); }};
    });
}

inline instance id5_bracket(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "id5_bracket", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "id5_bracket", [&] {
        const int w = r.next_int(4, cfg.shape.window_max);
        const operator_context ctx = detail_op::sample_context(r, cfg, nm, w);
        const int k = r.next_int(1, w - 1);
        const int l = r.next_int(0, k);
        detail::checked(vstar_coefficient_residual(ctx, k, l));
        return instance{"id5_bracket", trial, "window=" + std::to_string(w),
                        detail_op::ctx_params(ctx, k),
                        [ctx, k, l] { return vstar_coefficient_residual(ctx, k, l); }};
    });
}

inline instance reconstruct_g_id(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "reconstruct_g", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "reconstruct_g", [&] {
        const int w = r.next_int(6, cfg.shape.window_max);
        const operator_context ctx = detail_op::sample_context(r, cfg, nm, w);
        const int k = r.next_int(2, w - 3);
        const int l_min = 1;
        auto eval = [ctx, k, l_min] {
            const auto g = reconstruct_g(ctx, k, l_min);
            residual worst;
            for (const auto& [l, value] : g) {
                residual_sum acc;
                acc.add(value);
                acc.add(-g_entry(ctx.seq(), k, l));
                worst = worse(worst, acc.result());
            }
            return worst;
        };
        detail::checked(eval());
        return instance{"reconstruct_g", trial, "window=" + std::to_string(w),
                        detail_op::ctx_params(ctx, k), eval};
    });
}

namespace detail_km {

inline std::string km_params(const km_instance& inst) {
    detail::params_builder pb;
    pb.add("p", inst.base.base_nome().p())
        .add("q_star", inst.base.q_star())
        .add("Y", inst.base.refinement())
        .add_list("a", inst.a)
        .add_list("b", inst.b)
        .add_list("l", inst.l)
        .add_list("m", inst.m)
        .add_list("y", inst.y);
    return pb.str();
}

inline std::string km_shape(const km_instance& inst) {
    return "s=" + std::to_string(inst.s()) + ",r=" + std::to_string(inst.r()) +
           ",l=" + detail::fmt_list(inst.l) + ",m=" + detail::fmt_list(inst.m) +
           ",y=" + detail::fmt_list(inst.y);
}

inline std::string tt_params(const two_term_instance& inst) {
    detail::params_builder pb;
    pb.add("p", inst.base.base_nome().p())
        .add("q_star", inst.base.q_star())
        .add("Y", inst.base.refinement())
        .add("alpha", inst.alpha)
        .add("b", inst.b)
        .add("N", inst.N)
        .add("L", inst.L)
        .add_list("c", inst.c)
        .add_list("m", inst.m)
        .add_list("y", inst.y);
    return pb.str();
}

inline std::string tt_shape(const two_term_instance& inst) {
    return "r=" + std::to_string(inst.r()) + ",m=" + detail::fmt_list(inst.m) +
           ",y=" + detail::fmt_list(inst.y) + ",N=" + std::to_string(inst.N) +
           ",L=" + std::to_string(inst.L);
}

// draws (m, y) lists of r entries with |m| = total when total >= 0
inline void draw_pairs(rng& r, const sampler_config& cfg, int count, std::vector<int>& m,
                       std::vector<int>& y, int total = -1) {
    if (total >= 0)
        m = detail::compose(r, total, count, cfg.shape.m_max);
    else {
        m.clear();
        for (int j = 0; j < count; ++j) m.push_back(r.next_int(0, cfg.shape.m_max));
    }
    y.clear();
    for (int j = 0; j < count; ++j) y.push_back(r.next_int(1, cfg.shape.y_max));
}

} // namespace detail_km

inline instance kmt(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "kmt", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "kmt", [&] {
        const int s = r.next_int(1, cfg.shape.s_max);
        std::vector<int> l;
        for (int i = 0; i < s; ++i) l.push_back(r.next_int(0, cfg.shape.l_max));
        const int target = detail::total(l) + s - 2;
        if (target < 0) throw detail::resample_request{};
        const int rr = target == 0 ? r.next_int(0, cfg.shape.r_max)
                                   : r.next_int(1, cfg.shape.r_max);
        std::vector<int> m, y;
        detail_km::draw_pairs(r, cfg, rr, m, y, target);
        const refined_base base = detail::sample_base(r, cfg, nm, detail::lcm_of(y));
        std::vector<cplx> a, b;
        for (int i = 0; i < s; ++i) a.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        for (int j = 0; j < rr; ++j) b.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        const km_instance inst{a, b, l, m, y, base};
        const double delta = cfg.delta;
        detail::checked(kmt_residual(inst, delta));
        return instance{"kmt", trial, detail_km::km_shape(inst), detail_km::km_params(inst),
                        [inst, delta] { return kmt_residual(inst, delta); }};
    });
}

inline instance atr(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "atr", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "atr", [&] {
        const int s = r.next_int(1, cfg.shape.s_max);
        std::vector<int> l;
        for (int i = 0; i < s; ++i) l.push_back(r.next_int(0, cfg.shape.l_max));
        const int target = detail::total(l) + s;
        const int rr = r.next_int(1, cfg.shape.r_max);
        std::vector<int> m, y;
        detail_km::draw_pairs(r, cfg, rr, m, y, target);
        const refined_base base = detail::sample_base(r, cfg, nm, detail::lcm_of(y));
        std::vector<cplx> a, b;
        for (int i = 0; i < s; ++i) a.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        for (int j = 0; j < rr; ++j) b.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        km_instance inst{a, b, l, m, y, base};
        inst.a.back() = solve_apc_free_a(inst, inst.a.size() - 1);
        const double delta = cfg.delta;
        detail::checked(atr_residual(inst, delta));
        return instance{"atr", trial, detail_km::km_shape(inst), detail_km::km_params(inst),
                        [inst, delta] { return atr_residual(inst, delta); }};
    });
}

inline instance kmsi(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "kmsi", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "kmsi", [&] {
        const int rr = r.next_int(0, cfg.shape.r_max);
        std::vector<int> m;
        std::vector<cplx> c;
        for (int j = 0; j < rr; ++j) {
            m.push_back(r.next_int(0, cfg.shape.m_max));
            c.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        }
        const int N = detail::total(m);
        const refined_base base = detail::sample_base(r, cfg, nm, 1);
        const cplx a = r.next_annulus(cfg.r_min, cfg.r_max);
        const cplx b = r.next_annulus(cfg.r_min, cfg.r_max);
        const double delta = cfg.delta;
        detail::checked(kmsi_residual(a, b, c, m, N, base, delta));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("q", base.q()).add("a", a).add("b", b);
        pb.add_list("c", c).add_list("m", m).add("N", N);
        return instance{"kmsi", trial,
                        "r=" + std::to_string(rr) + ",m=" + detail::fmt_list(m) +
                            ",N=" + std::to_string(N),
                        pb.str(),
                        [=] { return kmsi_residual(a, b, c, m, N, base, delta); }};
    });
}

inline instance wbb(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "wbb", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "wbb", [&] {
        const int s = r.next_int(1, cfg.shape.s_max);
        const int N = r.next_int(0, cfg.shape.n_upper);
        const refined_base base = detail::sample_base(r, cfg, nm, 1);
        const wbb_instance inst{r.next_annulus(cfg.r_min, cfg.r_max),
                                r.next_annulus(cfg.r_min, cfg.r_max),
                                r.next_annulus(cfg.r_min, cfg.r_max), s, N, base};
        const double delta = cfg.delta;
        detail::checked(wbb_residual(inst, delta));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("q", base.q()).add("a", inst.a).add("b", inst.b);
        pb.add("c", inst.c).add("s", s).add("N", N);
        return instance{"wbb", trial, "s=" + std::to_string(s) + ",N=" + std::to_string(N),
                        pb.str(), [inst, delta] { return wbb_residual(inst, delta); }};
    });
}

namespace detail_km {

inline two_term_instance sample_two_term(rng& r, const sampler_config& cfg, const nome& nm,
                                         int total_floor, int free_L) {
    const int rr = r.next_int(1, cfg.shape.r_max);
    std::vector<int> m, y;
    for (int t = 0;; ++t) {
        draw_pairs(r, cfg, rr, m, y);
        if (detail::total(m) >= total_floor) break;
        if (t > cfg.retry_cap) throw detail::resample_request{};
    }
    const int total = detail::total(m);
    const int L = free_L < 0 ? r.next_int(0, std::min(cfg.shape.l_upper, total - total_floor))
                             : free_L;
    two_term_instance inst{r.next_annulus(cfg.r_min, cfg.r_max),
                           r.next_annulus(cfg.r_min, cfg.r_max),
                           0,
                           L,
                           {},
                           m,
                           y,
                           detail::sample_base(r, cfg, nm, detail::lcm_of(y))};
    for (int j = 0; j < rr; ++j) inst.c.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
    return inst;
}

} // namespace detail_km

inline instance trc(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "trc", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "trc", [&] {
        two_term_instance inst = detail_km::sample_two_term(r, cfg, nm, 0, -1);
        inst.N = detail::total(inst.m) - inst.L;
        const double delta = cfg.delta;
        detail::checked(trc_residual(inst, delta));
        return instance{"trc", trial, detail_km::tt_shape(inst), detail_km::tt_params(inst),
                        [inst, delta] { return trc_residual(inst, delta); }};
    });
}

inline instance mbkms(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "mbkms", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "mbkms", [&] {
        two_term_instance inst = detail_km::sample_two_term(r, cfg, nm, 0, 0);
        inst.N = detail::total(inst.m);
        const double delta = cfg.delta;
        detail::checked(mbkms_residual(inst, delta));
        return instance{"mbkms", trial, detail_km::tt_shape(inst), detail_km::tt_params(inst),
                        [inst, delta] { return mbkms_residual(inst, delta); }};
    });
}

inline instance akmt(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "akmt", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "akmt", [&] {
        two_term_instance inst = detail_km::sample_two_term(r, cfg, nm, 2, -1);
        const int total = detail::total(inst.m);
        inst.L = r.next_int(0, std::min(cfg.shape.l_upper, total - 2));
        inst.N = total - 2 - inst.L;
        // sweep the admissible roots of the power constraint across trials
        const auto roots = solve_npc_b(inst.N, inst.L, inst.c, inst.m, inst.y, inst.base);
        inst.b = roots[trial % roots.size()];
        const double delta = cfg.delta;
        detail::checked(akmt_residual(inst, delta));
        return instance{"akmt", trial, detail_km::tt_shape(inst), detail_km::tt_params(inst),
                        [inst, delta] { return akmt_residual(inst, delta); }};
    });
}

inline instance akms(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "akms", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "akms", [&] {
        two_term_instance inst = detail_km::sample_two_term(r, cfg, nm, 2, 0);
        inst.N = detail::total(inst.m) - 2;
        inst.b = solve_akms_b(inst.c, inst.m, inst.y, inst.N, inst.base);
        const double delta = cfg.delta;
        auto eval = [inst, delta] {
            return akms_residual(inst.N, inst.c, inst.m, inst.y, inst.base, delta);
        };
        detail::checked(eval());
        return instance{"akms", trial, detail_km::tt_shape(inst), detail_km::tt_params(inst),
                        eval};
    });
}

inline instance theta_split(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "theta_split", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "theta_split", [&] {
        const int mr = r.next_int(1, cfg.shape.m_max);
        const int N = r.next_int(0, cfg.shape.n_upper);
        const int k = r.next_int(0, N + 1);
        two_term_instance inst{r.next_annulus(cfg.r_min, cfg.r_max),
                               {1.0, 0.0},
                               N,
                               0,
                               {r.next_annulus(cfg.r_min, cfg.r_max)},
                               {mr},
                               {1},
                               detail::sample_base(r, cfg, nm, 1)};
        detail::checked(theta_split_residual(inst, k));
        detail::params_builder pb;
        pb.add("p", nm.p()).add("q", inst.base.q()).add("alpha", inst.alpha);
        pb.add("c_r", inst.c[0]).add("m_r", mr).add("N", N).add("k", k);
        return instance{"theta_split", trial,
                        "m_r=" + std::to_string(mr) + ",N=" + std::to_string(N) +
                            ",k=" + std::to_string(k),
                        pb.str(), [inst, k] { return theta_split_residual(inst, k); }};
    });
}

inline instance induction_bracket(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "induction_bracket", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "induction_bracket", [&] {
        const int mr = r.next_int(1, cfg.shape.m_max);
        const int N = r.next_int(0, cfg.shape.n_upper);
        two_term_instance inst{r.next_annulus(cfg.r_min, cfg.r_max),
                               r.next_annulus(cfg.r_min, cfg.r_max),
                               N,
                               0,
                               {r.next_annulus(cfg.r_min, cfg.r_max)},
                               {mr},
                               {1},
                               detail::sample_base(r, cfg, nm, 1)};
        const double delta = cfg.delta;
        detail::checked(induction_bracket_residual(inst, delta));
        return instance{"induction_bracket", trial,
                        "m_r=" + std::to_string(mr) + ",N=" + std::to_string(N),
                        detail_km::tt_params(inst),
                        [inst, delta] { return induction_bracket_residual(inst, delta); }};
    });
}

inline instance induction_step(const sampler_config& cfg, std::uint64_t trial) {
    rng r(cfg.seed, "induction_step", trial);
    const nome nm = detail::pick_nome(cfg, trial);
    return detail::with_retries(cfg, "induction_step", [&] {
        const int rr = r.next_int(1, cfg.shape.r_max);
        std::vector<int> m;
        for (int j = 0; j < rr; ++j) m.push_back(r.next_int(0, cfg.shape.m_max));
        if (m.back() == 0) {
            auto it = std::find_if(m.begin(), m.end(), [](int v) { return v > 0; });
            if (it == m.end()) throw detail::resample_request{};
            std::swap(*it, m.back());
        }
        two_term_instance inst{r.next_annulus(cfg.r_min, cfg.r_max),
                               r.next_annulus(cfg.r_min, cfg.r_max),
                               detail::total(m) - 1,
                               0,
                               {},
                               m,
                               std::vector<int>(m.size(), 1),
                               detail::sample_base(r, cfg, nm, 1)};
        for (int j = 0; j < rr; ++j) inst.c.push_back(r.next_annulus(cfg.r_min, cfg.r_max));
        const double delta = cfg.delta;
        detail::checked(induction_step_residual(inst, delta));
        return instance{"induction_step", trial, detail_km::tt_shape(inst),
                        detail_km::tt_params(inst),
                        [inst, delta] { return induction_step_residual(inst, delta); }};
    });
}

} // namespace samplers

// ---------------------------------------------------------------------------
// Registry and suite runner
// ---------------------------------------------------------------------------

struct identity_info {
    std::string name;
    double tolerance;
    instance (*sample)(const sampler_config&, std::uint64_t);
};

inline const std::vector<identity_info>& identity_registry() {
    static const std::vector<identity_info> table = {
        {"theta_inversion", 1e-12, samplers::theta_inversion},
        {"theta_quasiperiod", 1e-12, samplers::theta_quasiperiod},
        {"theta_addition", 1e-12, samplers::theta_addition},
        {"epdi", 1e-11, samplers::epdi},
        {"epi", 1e-11, samplers::epi},
        {"xsk", 1e-12, samplers::xsk},
        {"wmi", 1e-9, samplers::wmi},
        {"pmi", 1e-9, samplers::pmi},
        {"dpf", 1e-10, samplers::dpf},
        {"mipf", 1e-10, samplers::mipf},
        {"apf", 1e-10, samplers::apf},
        {"column_recurrence", 1e-11, samplers::column_recurrence},
        {"functional_eq", 1e-10, samplers::functional_eq},
        {"dual_eq", 1e-10, samplers::dual_eq},
        {"id5_bracket", 1e-11, samplers::id5_bracket},
        {"reconstruct_g", 1e-9, samplers::reconstruct_g_id},
        {"kmt", 1e-8, samplers::kmt},
        {"kmsi", 1e-8, samplers::kmsi},
        {"wbb", 1e-8, samplers::wbb},
        {"trc", 1e-8, samplers::trc},
        {"mbkms", 1e-8, samplers::mbkms},
        {"atr", 1e-8, samplers::atr},
        {"akmt", 1e-8, samplers::akmt},
        {"akms", 1e-8, samplers::akms},
        {"theta_split", 1e-11, samplers::theta_split},
        {"induction_bracket", 1e-11, samplers::induction_bracket},
        {"induction_step", 1e-8, samplers::induction_step},
    };
    return table;
}

inline const identity_info& find_identity(const std::string& name) {
    for (const auto& info : identity_registry())
        if (info.name == name) return info;
    throw config_error("unknown identity: " + name);
}

inline std::vector<std::string> all_identity_names() {
    std::vector<std::string> names;
    for (const auto& info : identity_registry()) names.push_back(info.name);
    return names;
}

inline instance sample_instance(const sampler_config& cfg, const std::string& identity,
                                std::uint64_t trial) {
    return find_identity(identity).sample(cfg, trial);
}

inline std::vector<trial_report> run_suite(const sampler_config& cfg,
                                           const std::vector<std::string>& identities,
                                           std::optional<double> tolerance = std::nullopt) {
    for (cplx p : cfg.p_values) {
        try {
            nome validate{p};
            (void)validate;
        } catch (const error& e) {
            throw config_error(e.what());
        }
    }
    std::vector<trial_report> reports;
    for (const std::string& name : identities) {
        const identity_info& info = find_identity(name);
        const double tol = tolerance.value_or(info.tolerance);
        for (std::uint64_t t = 0; t < cfg.trials; ++t) {
            trial_report rep;
            rep.identity = name;
            rep.trial = t;
            rep.tolerance = tol;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const instance inst = info.sample(cfg, t);
                rep.shape = inst.shape;
                rep.params = inst.params;
                rep.residual = inst.evaluate().relative;
                rep.pass = rep.residual < tol;
            } catch (const error& e) {
                rep.residual = std::numeric_limits<double>::quiet_NaN();
                rep.pass = false;
                rep.reason = e.what();
            }
            rep.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            reports.push_back(std::move(rep));
        }
    }
    return reports;
}

inline int suite_exit_code(const std::vector<trial_report>& reports) {
    for (const auto& rep : reports)
        if (!rep.pass) return 1;
    return 0;
}

inline std::string emit_report(const std::vector<trial_report>& reports, report_format format) {
    std::ostringstream out;
    if (format == report_format::structured) {
        // one self-describing record per trial; timing deliberately omitted
        // so reruns with the same seed are byte-identical
        for (const auto& rep : reports) {
            out << "{\"identity\":\"" << rep.identity << "\",\"trial\":" << rep.trial
                << ",\"shape\":\"" << rep.shape << "\",\"residual\":" << detail::fmt(rep.residual)
                << ",\"tolerance\":" << detail::fmt(rep.tolerance)
                << ",\"pass\":" << (rep.pass ? "true" : "false");
            if (!rep.reason.empty()) out << ",\"reason\":\"" << rep.reason << "\"";
            out << ",\"params\":" << (rep.params.empty() ? "{}" : rep.params) << "}\n";
        }
        return out.str();
    }

    // human format: one aggregated row per identity
    out << "identity             trials   pass   max residual   tolerance    status\n";
    out << "-------------------- -------- ------ -------------- ------------ ------\n";
    std::vector<std::string> seen;
    double total_time = 0.0;
    for (const auto& rep : reports) total_time += rep.wall_seconds;
    for (const auto& rep : reports) {
        if (std::find(seen.begin(), seen.end(), rep.identity) != seen.end()) continue;
        seen.push_back(rep.identity);
        std::uint64_t trials = 0, passed = 0;
        double max_res = 0.0, tol = rep.tolerance;
        bool errored = false;
        for (const auto& other : reports) {
            if (other.identity != rep.identity) continue;
            ++trials;
            if (other.pass) ++passed;
            if (!other.reason.empty()) errored = true;
            if (std::isnan(other.residual))
                errored = true;
            else
                max_res = std::max(max_res, other.residual);
        }
        char line[160];
        std::snprintf(line, sizeof(line), "%-20s %-8llu %-6llu %-14.5g %-12.3g %s\n",
                      rep.identity.c_str(), static_cast<unsigned long long>(trials),
                      static_cast<unsigned long long>(passed), max_res, tol,
                      passed == trials ? "ok" : (errored ? "error" : "FAIL"));
        out << line;
    }
    char foot[80];
    std::snprintf(foot, sizeof(foot), "total wall time: %.3f s\n", total_time);
    out << foot;
    return out.str();
}

} // namespace ellipsum

#endif
