// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_KARLSSON_MINTON_HPP
#define ELLIPSUM_KARLSSON_MINTON_HPP

#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ellipsum/errors.hpp"
#include "ellipsum/pochhammer.hpp"
#include "ellipsum/residual.hpp"
#include "ellipsum/theta.hpp"

namespace ellipsum {

// Parameter bundle for the multiterm transformations: s upper rows a_i with
// terminations l_i, r Karlsson-Minton pairs (b_j, m_j) with root orders y_j.
struct km_instance {
    std::vector<cplx> a;
    std::vector<cplx> b;
    std::vector<int> l;
    std::vector<int> m;
    std::vector<int> y;
    refined_base base;

    int s() const { return static_cast<int>(a.size()); }
    int r() const { return static_cast<int>(b.size()); }
};

// The s = 2 family: alpha carries the coherent square root with a = alpha^2,
// which the appendix substitutions need.
struct two_term_instance {
    cplx alpha;
    cplx b;
    int N = 0;
    int L = 0;
    std::vector<cplx> c;
    std::vector<int> m;
    std::vector<int> y;
    refined_base base;

    cplx a() const { return alpha * alpha; }
    int r() const { return static_cast<int>(c.size()); }
};

// The bibasic sum in bases q^s and q.
struct wbb_instance {
    cplx a, b, c;
    int s = 1;
    int N = 0;
    refined_base base;
};

inline constexpr double balance_tolerance = 1e-12;

namespace detail {

inline std::int64_t binom2(std::int64_t n) { return n * (n - 1) / 2; }

inline int total(std::span<const int> v) { return std::accumulate(v.begin(), v.end(), 0); }

inline void validate_lists(const km_instance& inst) {
    if (inst.l.size() != inst.a.size())
        throw bad_arity("need one termination l_i per a_i");
    if (inst.m.size() != inst.b.size() || inst.y.size() != inst.b.size())
        throw bad_arity("need one (m_j, y_j) per b_j");
    for (const cplx& v : inst.a)
        if (v == cplx{0.0, 0.0}) throw zero_argument{};
    for (const cplx& v : inst.b)
        if (v == cplx{0.0, 0.0}) throw zero_argument{};
    for (int li : inst.l)
        if (li < 0) throw constraint_violated("terminations l_i must be nonnegative");
    for (std::size_t j = 0; j < inst.y.size(); ++j) {
        if (inst.m[j] < 0) throw constraint_violated("multiplicities m_j must be nonnegative");
        if (inst.y[j] < 1) throw constraint_violated("root orders y_j must be positive");
        if (inst.base.refinement() % inst.y[j] != 0)
            throw constraint_violated("refinement Y must be divisible by every y_j");
    }
}

inline void validate_lists(const two_term_instance& inst) {
    if (inst.alpha == cplx{0.0, 0.0} || inst.b == cplx{0.0, 0.0}) throw zero_argument{};
    if (inst.N < 0 || inst.L < 0) throw constraint_violated("N and L must be nonnegative");
    if (inst.m.size() != inst.c.size() || inst.y.size() != inst.c.size())
        throw bad_arity("need one (m_j, y_j) per c_j");
    for (const cplx& v : inst.c)
        if (v == cplx{0.0, 0.0}) throw zero_argument{};
    for (std::size_t j = 0; j < inst.y.size(); ++j) {
        if (inst.m[j] < 0) throw constraint_violated("multiplicities m_j must be nonnegative");
        if (inst.y[j] < 1) throw constraint_violated("root orders y_j must be positive");
        if (inst.base.refinement() % inst.y[j] != 0)
            throw constraint_violated("refinement Y must be divisible by every y_j");
    }
}

// Running product of theta factors, shifted factorials and scalar weights;
// all divisions pass the delta guard.
class km_term {
  public:
    km_term(const refined_base& base, double delta) : base_(&base), delta_(delta) {}

    km_term& mul(cplx v) {
        val_ *= v;
        return *this;
    }
    km_term& mul_power(std::int64_t n) {
        val_ *= base_->power(n);
        return *this;
    }
    km_term& num_theta(cplx x) {
        val_ *= theta_scaled(x, base_->base_nome());
        return *this;
    }
    km_term& den_theta(cplx x) {
        val_ /= theta_denom(x, base_->base_nome(), delta_);
        return *this;
    }
    km_term& num(cplx a0, int step, int len) {
        val_ *= factorial_scaled({a0, step, len}, *base_, delta_);
        return *this;
    }
    km_term& den(cplx a0, int step, int len) {
        val_ /= factorial_denom_scaled({a0, step, len}, *base_, delta_);
        return *this;
    }
    const scaled& value() const { return val_; }

  private:
    const refined_base* base_;
    double delta_;
    scaled val_ = scaled::one();
};

// Left-hand summand shared by the two-term family (kmsi, mbkms, trc):
//   theta(a q^{2k})/theta(a) (a, q^{-N}, b, a q^{-L}/b; q)_k
//   / (q, a q^{N+1}, a q/b, b q^{L+1}; q)_k q^k
//   prod_j (c_j q^{m_j/y_j}, a q^{1/y_j}/c_j; q^{1/y_j})_{y_j k}
//        / (a q^{(1-m_j)/y_j}/c_j, c_j; q^{1/y_j})_{y_j k}
inline scaled two_term_lhs_term(cplx a, cplx b, std::span<const cplx> c, std::span<const int> m,
                                std::span<const int> y, int N, int L, const refined_base& base,
                                int k, double delta) {
    const int Y = base.refinement();
    const cplx q = base.q();
    km_term t(base, delta);
    t.num_theta(a * base.power(2LL * k * Y)).den_theta(a);
    t.mul_power(static_cast<std::int64_t>(k) * Y);
    t.num(a, Y, k).num(base.power(-static_cast<std::int64_t>(N) * Y), Y, k);
    t.num(b, Y, k).num(a * base.power(-static_cast<std::int64_t>(L) * Y) / b, Y, k);
    t.den(q, Y, k).den(a * base.power(static_cast<std::int64_t>(N + 1) * Y), Y, k);
    t.den(a * q / b, Y, k).den(b * base.power(static_cast<std::int64_t>(L + 1) * Y), Y, k);
    for (std::size_t j = 0; j < c.size(); ++j) {
        const int sj = Y / y[j];
        t.num(c[j] * base.power(static_cast<std::int64_t>(sj) * m[j]), sj, y[j] * k);
        t.num(a * base.power(sj) / c[j], sj, y[j] * k);
        t.den(a * base.power(static_cast<std::int64_t>(sj) * (1 - m[j])) / c[j], sj, y[j] * k);
        t.den(c[j], sj, y[j] * k);
    }
    return t.value();
}

// Closed form (a q, q; q)_N / (b q, a q/b; q)_N prod_j (c_j/b, c_j b/a)_{m_j}
// / (c_j, c_j/a)_{m_j}: the right-hand side of the summation formulas.
inline scaled two_term_closed_form(cplx a, cplx b, std::span<const cplx> c,
                                   std::span<const int> m, std::span<const int> y, int N,
                                   const refined_base& base, double delta) {
    const int Y = base.refinement();
    const cplx q = base.q();
    km_term t(base, delta);
    t.num(a * q, Y, N).num(q, Y, N).den(b * q, Y, N).den(a * q / b, Y, N);
    for (std::size_t j = 0; j < c.size(); ++j) {
        const int sj = Y / y[j];
        t.num(c[j] / b, sj, m[j]).num(c[j] * b / a, sj, m[j]);
        t.den(c[j], sj, m[j]).den(c[j] / a, sj, m[j]);
    }
    return t.value();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Balance constraints and their solvers
// ---------------------------------------------------------------------------

enum class balance_mode { apc, npc, akms_b };

// relative mismatch of the apc product constraint
// q^{sum binom(l_i+1,2)} prod a_i^{l_i+1} = q^{sum binom(m_j,2)/y_j} prod b_j^{m_j}
inline double apc_mismatch(const km_instance& inst) {
    detail::validate_lists(inst);
    const int Y = inst.base.refinement();
    std::int64_t le = 0;
    cplx lhs = 1.0;
    for (std::size_t i = 0; i < inst.a.size(); ++i) {
        le += Y * detail::binom2(inst.l[i] + 1);
        lhs *= ipow(inst.a[i], inst.l[i] + 1);
    }
    std::int64_t re = 0;
    cplx rhs = 1.0;
    for (std::size_t j = 0; j < inst.b.size(); ++j) {
        re += (Y / inst.y[j]) * detail::binom2(inst.m[j]);
        rhs *= ipow(inst.b[j], inst.m[j]);
    }
    lhs *= inst.base.power(le);
    rhs *= inst.base.power(re);
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

// relative mismatch of npc:
// q^{binom(L+1,2)} b^{L+1} = q^{binom(N+1,2) + sum binom(m_j,2)/y_j} prod c_j^{m_j}
inline double npc_mismatch(const two_term_instance& inst) {
    detail::validate_lists(inst);
    const int Y = inst.base.refinement();
    cplx lhs = ipow(inst.b, inst.L + 1) * inst.base.power(Y * detail::binom2(inst.L + 1));
    std::int64_t re = Y * detail::binom2(inst.N + 1);
    cplx rhs = 1.0;
    for (std::size_t j = 0; j < inst.c.size(); ++j) {
        re += (Y / inst.y[j]) * detail::binom2(inst.m[j]);
        rhs *= ipow(inst.c[j], inst.m[j]);
    }
    rhs *= inst.base.power(re);
    return std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
}

// b = q^{binom(N+1,2) + sum binom(m_j,2)/y_j} prod c_j^{m_j}; the exponent of
// b is 1, so there is no root to choose.
inline cplx solve_akms_b(std::span<const cplx> c, std::span<const int> m, std::span<const int> y,
                         int N, const refined_base& base) {
    const int Y = base.refinement();
    std::int64_t e = Y * detail::binom2(N + 1);
    cplx b = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (y[j] < 1 || Y % y[j] != 0)
            throw constraint_violated("refinement Y must be divisible by every y_j");
        e += (Y / y[j]) * detail::binom2(m[j]);
        b *= ipow(c[j], m[j]);
    }
    return b * base.power(e);
}

// All L+1 admissible values of b, principal root first.
inline std::vector<cplx> solve_npc_b(int N, int L, std::span<const cplx> c,
                                     std::span<const int> m, std::span<const int> y,
                                     const refined_base& base) {
    if (L < 0) throw constraint_violated("L must be nonnegative");
    const int Y = base.refinement();
    std::int64_t e = Y * (detail::binom2(N + 1) - detail::binom2(L + 1));
    cplx w = 1.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (y[j] < 1 || Y % y[j] != 0)
            throw constraint_violated("refinement Y must be divisible by every y_j");
        e += (Y / y[j]) * detail::binom2(m[j]);
        w *= ipow(c[j], m[j]);
    }
    w *= base.power(e);
    const int n = L + 1;
    const cplx principal = std::pow(w, 1.0 / static_cast<double>(n));
    std::vector<cplx> roots;
    roots.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        roots.push_back(principal * std::polar(1.0, 2.0 * std::numbers::pi * t / n));
    return roots;
}

// Principal solution of apc for the designated free parameter; the remaining
// entries of the instance supply the knowns.  Solving for a b_j with
// m_j = 0 has no equation to solve.
inline cplx solve_apc_free_a(const km_instance& inst, std::size_t i) {
    detail::validate_lists(inst);
    if (i >= inst.a.size()) throw bad_arity("free a index outside the list");
    const int Y = inst.base.refinement();
    std::int64_t e = 0;
    cplx w = 1.0;
    for (std::size_t j = 0; j < inst.b.size(); ++j) {
        e += (Y / inst.y[j]) * detail::binom2(inst.m[j]);
        w *= ipow(inst.b[j], inst.m[j]);
    }
    for (std::size_t t = 0; t < inst.a.size(); ++t) {
        e -= Y * detail::binom2(inst.l[t] + 1);
        if (t != i) w /= ipow(inst.a[t], inst.l[t] + 1);
    }
    w *= inst.base.power(e);
    return std::pow(w, 1.0 / static_cast<double>(inst.l[i] + 1));
}

inline cplx solve_apc_free_b(const km_instance& inst, std::size_t j) {
    detail::validate_lists(inst);
    if (j >= inst.b.size()) throw bad_arity("free b index outside the list");
    if (inst.m[j] == 0)
        throw degenerate_constraint("free parameter b_j enters apc with exponent m_j = 0");
    const int Y = inst.base.refinement();
    std::int64_t e = 0;
    cplx w = 1.0;
    for (std::size_t t = 0; t < inst.a.size(); ++t) {
        e += Y * detail::binom2(inst.l[t] + 1);
        w *= ipow(inst.a[t], inst.l[t] + 1);
    }
    for (std::size_t t = 0; t < inst.b.size(); ++t) {
        e -= (Y / inst.y[t]) * detail::binom2(inst.m[t]);
        if (t != j) w /= ipow(inst.b[t], inst.m[t]);
    }
    w *= inst.base.power(e);
    return std::pow(w, 1.0 / static_cast<double>(inst.m[j]));
}

// Re-checks a supplied instance against the designated constraint.
inline void verify_balance(balance_mode mode, const km_instance& inst,
                           double tol = balance_tolerance) {
    if (mode != balance_mode::apc) throw bad_shape("km_instance only carries the apc constraint");
    const double miss = apc_mismatch(inst);
    if (!(miss <= tol))
        throw constraint_violated("apc constraint violated, relative mismatch " +
                                  std::to_string(miss));
}

inline void verify_balance(balance_mode mode, const two_term_instance& inst,
                           double tol = balance_tolerance) {
    double miss = 0.0;
    switch (mode) {
    case balance_mode::npc:
        miss = npc_mismatch(inst);
        break;
    case balance_mode::akms_b: {
        const cplx want = solve_akms_b(inst.c, inst.m, inst.y, inst.N, inst.base);
        miss = std::abs(inst.b - want) / std::max(std::abs(inst.b), std::abs(want));
        break;
    }
    default:
        throw bad_shape("two_term_instance carries the npc / akms constraints");
    }
    if (!(miss <= tol))
        throw constraint_violated("balance constraint violated, relative mismatch " +
                                  std::to_string(miss));
}

// ---------------------------------------------------------------------------
// Theorem-level identities
// ---------------------------------------------------------------------------

// Flattened (i, k) terms of the multiterm Karlsson-Minton transformation;
// the full double sum vanishes when |l| + s = |m| + 2.
inline std::vector<scaled> kmt_terms(const km_instance& inst,
                                     double delta = default_zero_delta) {
    detail::validate_lists(inst);
    if (detail::total(inst.l) + inst.s() != detail::total(inst.m) + 2)
        throw constraint_violated("kmt needs |l| + s = |m| + 2");
    const int Y = inst.base.refinement();
    const cplx q = inst.base.q();
    std::vector<scaled> terms;
    for (int i = 0; i < inst.s(); ++i) {
        const cplx ai = inst.a[static_cast<std::size_t>(i)];
        detail::km_term pre(inst.base, delta);
        pre.mul(ai);
        for (int j = 0; j < inst.r(); ++j) {
            const int sj = Y / inst.y[static_cast<std::size_t>(j)];
            const int mj = inst.m[static_cast<std::size_t>(j)];
            const cplx bj = inst.b[static_cast<std::size_t>(j)];
            pre.num(ai * bj, sj, mj);
            pre.num(ai * inst.base.power(static_cast<std::int64_t>(sj) * (1 - mj)) / bj, sj, mj);
        }
        const int li = inst.l[static_cast<std::size_t>(i)];
        pre.den(ai * ai * q, Y, li);
        pre.den(inst.base.power(-static_cast<std::int64_t>(li) * Y), Y, li);
        for (int j = 0; j < inst.s(); ++j) {
            if (j == i) continue;
            const int lj = inst.l[static_cast<std::size_t>(j)];
            const cplx aj = inst.a[static_cast<std::size_t>(j)];
            pre.den(ai * aj, Y, lj + 1);
            pre.den(ai * inst.base.power(-static_cast<std::int64_t>(lj) * Y) / aj, Y, lj + 1);
        }
        for (int k = 0; k <= li; ++k) {
            detail::km_term t = pre;
            t.num_theta(ai * ai * inst.base.power(2LL * k * Y)).den_theta(ai * ai);
            t.mul_power(static_cast<std::int64_t>(k) * Y);
            for (int j = 0; j < inst.s(); ++j) {
                const int lj = inst.l[static_cast<std::size_t>(j)];
                const cplx aj = inst.a[static_cast<std::size_t>(j)];
                t.num(ai * aj, Y, k);
                t.num(ai * inst.base.power(-static_cast<std::int64_t>(lj) * Y) / aj, Y, k);
                t.den(ai * q / aj, Y, k);
                t.den(ai * aj * inst.base.power(static_cast<std::int64_t>(lj + 1) * Y), Y, k);
            }
            for (int j = 0; j < inst.r(); ++j) {
                const int sj = Y / inst.y[static_cast<std::size_t>(j)];
                const int mj = inst.m[static_cast<std::size_t>(j)];
                const int len = inst.y[static_cast<std::size_t>(j)] * k;
                const cplx bj = inst.b[static_cast<std::size_t>(j)];
                t.num(ai * bj * inst.base.power(static_cast<std::int64_t>(sj) * mj), sj, len);
                t.num(ai * inst.base.power(sj) / bj, sj, len);
                t.den(ai * inst.base.power(static_cast<std::int64_t>(sj) * (1 - mj)) / bj, sj, len);
                t.den(ai * bj, sj, len);
            }
            terms.push_back(t.value());
        }
    }
    return terms;
}

inline residual kmt_residual(const km_instance& inst, double delta = default_zero_delta) {
    return residual_from_terms(kmt_terms(inst, delta));
}

// Rewrites every (b_j, m_j, y_j) with y_j > 1 into y_j unit-order pairs along
// the geometric progression; term-by-term equivalent to the original.
inline km_instance expand_to_unit_y(const km_instance& inst) {
    km_instance out{inst.a, {}, inst.l, {}, {}, inst.base};
    const int Y = inst.base.refinement();
    for (std::size_t j = 0; j < inst.b.size(); ++j) {
        const int yj = inst.y[j];
        const int sj = Y / yj;
        for (int rho = 0; rho < yj; ++rho) {
            out.b.push_back(inst.b[j] * inst.base.power(static_cast<std::int64_t>(sj) * rho));
            out.m.push_back(inst.m[j] > rho ? (inst.m[j] - rho + yj - 1) / yj : 0);
            out.y.push_back(1);
        }
    }
    return out;
}

// Flattened terms of the exotic multiterm transformation (vanishing double
// sum under |l| + s = |m| and the apc product constraint).
inline std::vector<scaled> atr_terms(const km_instance& inst,
                                     double delta = default_zero_delta) {
    detail::validate_lists(inst);
    if (detail::total(inst.l) + inst.s() != detail::total(inst.m))
        throw constraint_violated("atr needs |l| + s = |m|");
    verify_balance(balance_mode::apc, inst);
    const int Y = inst.base.refinement();
    const cplx q = inst.base.q();
    std::vector<scaled> terms;
    for (int i = 0; i < inst.s(); ++i) {
        const cplx ai = inst.a[static_cast<std::size_t>(i)];
        const int li = inst.l[static_cast<std::size_t>(i)];
        detail::km_term pre(inst.base, delta);
        for (int j = 0; j < inst.r(); ++j) {
            const int sj = Y / inst.y[static_cast<std::size_t>(j)];
            const int mj = inst.m[static_cast<std::size_t>(j)];
            pre.num(ai * inst.base.power(static_cast<std::int64_t>(sj) * (1 - mj)) /
                        inst.b[static_cast<std::size_t>(j)],
                    sj, mj);
        }
        pre.den(inst.base.power(-static_cast<std::int64_t>(li) * Y), Y, li);
        for (int j = 0; j < inst.s(); ++j) {
            if (j == i) continue;
            const int lj = inst.l[static_cast<std::size_t>(j)];
            pre.den(ai * inst.base.power(-static_cast<std::int64_t>(lj) * Y) /
                        inst.a[static_cast<std::size_t>(j)],
                    Y, lj + 1);
        }
        for (int k = 0; k <= li; ++k) {
            detail::km_term t = pre;
            for (int j = 0; j < inst.s(); ++j) {
                const int lj = inst.l[static_cast<std::size_t>(j)];
                const cplx aj = inst.a[static_cast<std::size_t>(j)];
                t.num(ai * inst.base.power(-static_cast<std::int64_t>(lj) * Y) / aj, Y, k);
                t.den(ai * q / aj, Y, k);
            }
            for (int j = 0; j < inst.r(); ++j) {
                const int sj = Y / inst.y[static_cast<std::size_t>(j)];
                const int mj = inst.m[static_cast<std::size_t>(j)];
                const int len = inst.y[static_cast<std::size_t>(j)] * k;
                const cplx bj = inst.b[static_cast<std::size_t>(j)];
                t.num(ai * inst.base.power(sj) / bj, sj, len);
                t.den(ai * inst.base.power(static_cast<std::int64_t>(sj) * (1 - mj)) / bj, sj, len);
            }
            terms.push_back(t.value());
        }
    }
    return terms;
}

inline residual atr_residual(const km_instance& inst, double delta = default_zero_delta) {
    return residual_from_terms(atr_terms(inst, delta));
}

// ---------------------------------------------------------------------------
// Summation formulas
// ---------------------------------------------------------------------------

// Karlsson-Minton summation, base q, |m| = N.
inline std::vector<scaled> kmsi_terms(cplx a, cplx b, std::span<const cplx> c,
                                      std::span<const int> m, int N, const refined_base& base,
                                      double delta = default_zero_delta) {
    if (static_cast<int>(c.size()) != static_cast<int>(m.size()))
        throw bad_arity("need one m_j per c_j");
    if (detail::total(m) != N) throw constraint_violated("kmsi needs |m| = N");
    const std::vector<int> y(c.size(), 1);
    std::vector<scaled> terms;
    for (int k = 0; k <= N; ++k)
        terms.push_back(detail::two_term_lhs_term(a, b, c, m, y, N, 0, base, k, delta));
    terms.push_back(-detail::two_term_closed_form(a, b, c, m, y, N, base, delta));
    return terms;
}

inline residual kmsi_residual(cplx a, cplx b, std::span<const cplx> c, std::span<const int> m,
                              int N, const refined_base& base,
                              double delta = default_zero_delta) {
    return residual_from_terms(kmsi_terms(a, b, c, m, N, base, delta));
}

// Fractional-base summation (the L = 0 case of the transformation), |m| = N.
inline std::vector<scaled> mbkms_terms(const two_term_instance& inst,
                                       double delta = default_zero_delta) {
    detail::validate_lists(inst);
    if (inst.L != 0) throw constraint_violated("mbkms needs L = 0");
    if (detail::total(inst.m) != inst.N) throw constraint_violated("mbkms needs |m| = N");
    const cplx a = inst.a();
    std::vector<scaled> terms;
    for (int k = 0; k <= inst.N; ++k)
        terms.push_back(detail::two_term_lhs_term(a, inst.b, inst.c, inst.m, inst.y, inst.N, 0,
                                                  inst.base, k, delta));
    terms.push_back(
        -detail::two_term_closed_form(a, inst.b, inst.c, inst.m, inst.y, inst.N, inst.base, delta));
    return terms;
}

inline residual mbkms_residual(const two_term_instance& inst,
                               double delta = default_zero_delta) {
    return residual_from_terms(mbkms_terms(inst, delta));
}

// Bibasic sum in q^s and q.
inline std::vector<scaled> wbb_terms(const wbb_instance& inst,
                                     double delta = default_zero_delta) {
    if (inst.a == cplx{0.0, 0.0} || inst.b == cplx{0.0, 0.0} || inst.c == cplx{0.0, 0.0})
        throw zero_argument{};
    if (inst.s < 1 || inst.N < 0) throw constraint_violated("wbb needs s >= 1, N >= 0");
    const int Y = inst.base.refinement();
    const int Ys = Y * inst.s;
    const cplx q = inst.base.q();
    const cplx qs = inst.base.power(Ys);
    const cplx a = inst.a, b = inst.b, c = inst.c;
    const int N = inst.N, s = inst.s;
    std::vector<scaled> terms;
    for (int k = 0; k <= N; ++k) {
        detail::km_term t(inst.base, delta);
        t.num_theta(a * inst.base.power(2LL * k * Ys)).den_theta(a);
        t.mul_power(static_cast<std::int64_t>(k) * Ys); // q^{sk}
        t.num(a, Ys, k).num(inst.base.power(-static_cast<std::int64_t>(N) * Ys), Ys, k);
        t.num(b, Ys, k).num(a / b, Ys, k);
        t.den(qs, Ys, k).den(a * inst.base.power(static_cast<std::int64_t>(N + 1) * Ys), Ys, k);
        t.den(a * qs / b, Ys, k).den(b * qs, Ys, k);
        t.num(c * inst.base.power(static_cast<std::int64_t>(N) * Y), Y, s * k);
        t.num(a * q / c, Y, s * k);
        t.den(a * inst.base.power(static_cast<std::int64_t>(1 - N) * Y) / c, Y, s * k);
        t.den(c, Y, s * k);
        terms.push_back(t.value());
    }
    detail::km_term rhs(inst.base, delta);
    rhs.num(a * qs, Ys, N).num(qs, Ys, N).den(b * qs, Ys, N).den(a * qs / b, Ys, N);
    rhs.num(c / b, Y, N).num(b * c / a, Y, N).den(c, Y, N).den(c / a, Y, N);
    terms.push_back(-rhs.value());
    return terms;
}

inline residual wbb_residual(const wbb_instance& inst, double delta = default_zero_delta) {
    return residual_from_terms(wbb_terms(inst, delta));
}

// ---------------------------------------------------------------------------
// Two-term transformation and the exotic corollaries
// ---------------------------------------------------------------------------

// The s = 2 transformation: the N-sum against the prefactored L-sum, |m| = L + N.
inline std::vector<scaled> trc_terms(const two_term_instance& inst,
                                     double delta = default_zero_delta) {
    detail::validate_lists(inst);
    if (detail::total(inst.m) != inst.L + inst.N)
        throw constraint_violated("trc needs |m| = L + N");
    const int Y = inst.base.refinement();
    const cplx q = inst.base.q();
    const cplx a = inst.a(), b = inst.b;
    const int N = inst.N, L = inst.L;
    std::vector<scaled> terms;
    for (int k = 0; k <= N; ++k)
        terms.push_back(
            detail::two_term_lhs_term(a, b, inst.c, inst.m, inst.y, N, L, inst.base, k, delta));

    detail::km_term pre(inst.base, delta);
    pre.num(a * q, Y, N).num(q, Y, N).den(b * q, Y, N).den(a * q / b, Y, N);
    pre.num(b * q, Y, L).num(b * q / a, Y, L);
    pre.den(b * b * q / a, Y, L).den(q, Y, L);
    for (std::size_t j = 0; j < inst.c.size(); ++j) {
        const int sj = Y / inst.y[j];
        pre.num(inst.c[j] / b, sj, inst.m[j]).num(inst.c[j] * b / a, sj, inst.m[j]);
        pre.den(inst.c[j], sj, inst.m[j]).den(inst.c[j] / a, sj, inst.m[j]);
    }
    for (int k = 0; k <= L; ++k) {
        detail::km_term t = pre;
        t.num_theta(b * b * inst.base.power(2LL * k * Y) / a).den_theta(b * b / a);
        t.mul_power(static_cast<std::int64_t>(k) * Y);
        t.num(b * b / a, Y, k).num(inst.base.power(-static_cast<std::int64_t>(L) * Y), Y, k);
        t.num(b, Y, k).num(b * inst.base.power(-static_cast<std::int64_t>(N) * Y) / a, Y, k);
        t.den(q, Y, k).den(b * b * inst.base.power(static_cast<std::int64_t>(L + 1) * Y) / a, Y, k);
        t.den(b * q / a, Y, k).den(b * inst.base.power(static_cast<std::int64_t>(N + 1) * Y), Y, k);
        for (std::size_t j = 0; j < inst.c.size(); ++j) {
            const int sj = Y / inst.y[j];
            const int len = inst.y[j] * k;
            t.num(b * inst.c[j] * inst.base.power(static_cast<std::int64_t>(sj) * inst.m[j]) / a,
                  sj, len);
            t.num(b * inst.base.power(sj) / inst.c[j], sj, len);
            t.den(b * inst.base.power(static_cast<std::int64_t>(sj) * (1 - inst.m[j])) / inst.c[j],
                  sj, len);
            t.den(b * inst.c[j] / a, sj, len);
        }
        terms.push_back(-t.value());
    }
    return terms;
}

inline residual trc_residual(const two_term_instance& inst,
                             double delta = default_zero_delta) {
    return residual_from_terms(trc_terms(inst, delta));
}

// Exotic transformation: |m| = N + L + 2 under npc; note the absence of q^k.
inline std::vector<scaled> akmt_terms(const two_term_instance& inst,
                                      double delta = default_zero_delta) {
    detail::validate_lists(inst);
    if (detail::total(inst.m) != inst.N + inst.L + 2)
        throw constraint_violated("akmt needs |m| = N + L + 2");
    verify_balance(balance_mode::npc, inst);
    const int Y = inst.base.refinement();
    const cplx q = inst.base.q();
    const cplx b = inst.b;
    const int N = inst.N, L = inst.L;
    std::vector<scaled> terms;
    for (int k = 0; k <= N; ++k) {
        detail::km_term t(inst.base, delta);
        t.num(inst.base.power(-static_cast<std::int64_t>(N) * Y), Y, k).num(b, Y, k);
        t.den(q, Y, k).den(b * inst.base.power(static_cast<std::int64_t>(L + 1) * Y), Y, k);
        for (std::size_t j = 0; j < inst.c.size(); ++j) {
            const int sj = Y / inst.y[j];
            const int len = inst.y[j] * k;
            t.num(inst.c[j] * inst.base.power(static_cast<std::int64_t>(sj) * inst.m[j]), sj, len);
            t.den(inst.c[j], sj, len);
        }
        terms.push_back(t.value());
    }
    detail::km_term pre(inst.base, delta);
    pre.mul(ipow(b, N + 1));
    pre.num(q, Y, N).num(b * q, Y, L).den(b * q, Y, N).den(q, Y, L);
    for (std::size_t j = 0; j < inst.c.size(); ++j) {
        const int sj = Y / inst.y[j];
        pre.num(inst.c[j] / b, sj, inst.m[j]).den(inst.c[j], sj, inst.m[j]);
    }
    for (int k = 0; k <= L; ++k) {
        detail::km_term t = pre;
        t.num(inst.base.power(-static_cast<std::int64_t>(L) * Y), Y, k).num(b, Y, k);
        t.den(q, Y, k).den(b * inst.base.power(static_cast<std::int64_t>(N + 1) * Y), Y, k);
        for (std::size_t j = 0; j < inst.c.size(); ++j) {
            const int sj = Y / inst.y[j];
            const int len = inst.y[j] * k;
            t.num(b * inst.base.power(sj) / inst.c[j], sj, len);
            t.den(b * inst.base.power(static_cast<std::int64_t>(sj) * (1 - inst.m[j])) / inst.c[j],
                  sj, len);
        }
        terms.push_back(-t.value());
    }
    return terms;
}

inline residual akmt_residual(const two_term_instance& inst,
                              double delta = default_zero_delta) {
    return residual_from_terms(akmt_terms(inst, delta));
}

// Exotic summation: |m| = N + 2 with b computed from the displayed constraint.
inline std::vector<scaled> akms_terms(int N, std::span<const cplx> c, std::span<const int> m,
                                      std::span<const int> y, const refined_base& base,
                                      double delta = default_zero_delta) {
    if (c.size() != m.size() || c.size() != y.size())
        throw bad_arity("need one (m_j, y_j) per c_j");
    if (N < 0) throw constraint_violated("akms needs N >= 0");
    if (detail::total(m) != N + 2) throw constraint_violated("akms needs |m| = N + 2");
    const cplx b = solve_akms_b(c, m, y, N, base);
    const int Y = base.refinement();
    const cplx q = base.q();
    std::vector<scaled> terms;
    for (int k = 0; k <= N; ++k) {
        detail::km_term t(base, delta);
        t.num(base.power(-static_cast<std::int64_t>(N) * Y), Y, k).num(b, Y, k);
        t.den(q, Y, k).den(b * q, Y, k);
        for (std::size_t j = 0; j < c.size(); ++j) {
            const int sj = Y / y[j];
            const int len = y[j] * k;
            t.num(c[j] * base.power(static_cast<std::int64_t>(sj) * m[j]), sj, len);
            t.den(c[j], sj, len);
        }
        terms.push_back(t.value());
    }
    detail::km_term rhs(base, delta);
    rhs.mul(ipow(b, N + 1));
    rhs.num(q, Y, N).den(b * q, Y, N);
    for (std::size_t j = 0; j < c.size(); ++j) {
        const int sj = Y / y[j];
        rhs.num(c[j] / b, sj, m[j]).den(c[j], sj, m[j]);
    }
    terms.push_back(-rhs.value());
    return terms;
}

inline residual akms_residual(int N, std::span<const cplx> c, std::span<const int> m,
                              std::span<const int> y, const refined_base& base,
                              double delta = default_zero_delta) {
    return residual_from_terms(akms_terms(N, c, m, y, base, delta));
}

// ---------------------------------------------------------------------------
// Appendix machinery
// ---------------------------------------------------------------------------

// The multiply-by-one split of the inductive proof: a three-term theta
// relation in a = alpha^2, the last pair (c_r, m_r) and the running index k.
inline residual theta_split_residual(const two_term_instance& inst, int k) {
    detail::validate_lists(inst);
    if (inst.c.empty() || inst.m.back() < 1)
        throw constraint_violated("theta split needs a last pair with m_r >= 1");
    const cplx a = inst.a();
    const cplx cr = inst.c.back();
    const int mr = inst.m.back();
    const int N = inst.N;
    const nome& nm = inst.base.base_nome();
    const int Y = inst.base.refinement();
    auto qp = [&](std::int64_t n) { return inst.base.power(n * Y); };

    residual_sum acc;
    acc.add(theta_product(
        {a * qp(k + N + 1), qp(k - N - 1), cr * qp(mr - 1), a * qp(1 - mr) / cr}, nm));
    acc.add(-qp(-N - 1) * theta_product(
        {a * qp(k), qp(k), cr * qp(mr + N), a * qp(2 - mr + N) / cr}, nm));
    acc.add(-theta_product(
        {a * qp(N + 1), qp(-N - 1), cr * qp(mr + k - 1), a * qp(1 - mr + k) / cr}, nm));
    return acc.result();
}

// Brace simplification used at the end of the induction: 1 minus a quotient
// of four theta pairs collapses to a single quotient.
inline residual induction_bracket_residual(const two_term_instance& inst,
                                           double delta = default_zero_delta) {
    detail::validate_lists(inst);
    if (inst.c.empty() || inst.m.back() < 1)
        throw constraint_violated("bracket identity needs a last pair with m_r >= 1");
    const cplx a = inst.a(), b = inst.b;
    const cplx cr = inst.c.back();
    const int mr = inst.m.back();
    const int N = inst.N;
    const int Y = inst.base.refinement();
    auto qp = [&](std::int64_t n) { return inst.base.power(n * Y); };

    detail::km_term t2(inst.base, delta);
    t2.num_theta(b).num_theta(a / b).num_theta(cr * qp(N + mr)).num_theta(a * qp(N + 2 - mr) / cr);
    t2.den_theta(b * qp(N + 1)).den_theta(a * qp(N + 1) / b);
    t2.den_theta(cr * qp(mr - 1)).den_theta(a * qp(1 - mr) / cr);

    detail::km_term t3(inst.base, delta);
    t3.num_theta(qp(N + 1)).num_theta(a * qp(N + 1));
    t3.num_theta(qp(mr - 1) * cr / b).num_theta(qp(mr - 1) * cr * b / a);
    t3.den_theta(b * qp(N + 1)).den_theta(a * qp(N + 1) / b);
    t3.den_theta(qp(mr - 1) * cr).den_theta(qp(mr - 1) * cr / a);

    residual_sum acc;
    acc.add(cplx{1.0, 0.0});
    acc.add(-t2.value());
    acc.add(-t3.value());
    return acc.result();
}

// Inductive step from N to N + 1 at L = 0, y == 1: the direct (N+1)-term sum
// against the appendix decomposition into two N-level closed forms.
inline std::vector<scaled> induction_step_terms(const two_term_instance& inst,
                                                double delta = default_zero_delta) {
    detail::validate_lists(inst);
    if (inst.L != 0) throw constraint_violated("induction step runs at L = 0");
    for (int yj : inst.y)
        if (yj != 1) throw constraint_violated("induction step runs in the unit-order base");
    if (inst.c.empty() || inst.m.back() < 1)
        throw constraint_violated("induction step needs a last pair with m_r >= 1");
    if (detail::total(inst.m) != inst.N + 1)
        throw constraint_violated("induction step needs |m| = N + 1");

    const cplx a = inst.a(), b = inst.b;
    const int N = inst.N;
    const int Y = inst.base.refinement();
    const cplx cr = inst.c.back();
    const int mr = inst.m.back();
    auto qp = [&](std::int64_t n) { return inst.base.power(n * Y); };

    std::vector<scaled> terms;
    // route A: the sum at level N + 1
    for (int k = 0; k <= N + 1; ++k)
        terms.push_back(detail::two_term_lhs_term(a, b, inst.c, inst.m, inst.y, N + 1, 0,
                                                  inst.base, k, delta));

    // route B, first piece: level-N closed form with (c_r, m_r - 1)
    std::vector<int> m1 = inst.m;
    m1.back() -= 1;
    terms.push_back(
        -detail::two_term_closed_form(a, b, inst.c, m1, inst.y, N, inst.base, delta));

    // route B, second piece: the reindexed-tail prefactor times the level-N
    // closed form at (a q^2, b q, c_j q)
    detail::km_term pref(inst.base, delta);
    pref.mul(-qp(-N));
    pref.num_theta(a * qp(1)).num_theta(a * qp(2)).num_theta(b).num_theta(a / b);
    pref.num_theta(cr * qp(mr + N)).num_theta(a * qp(1) / cr).num_theta(a * qp(2 - mr + N) / cr);
    pref.den_theta(a * qp(1) / b).den_theta(b * qp(1));
    pref.den_theta(a * qp(N + 1)).den_theta(a * qp(N + 2));
    pref.den_theta(a * qp(1 - mr) / cr).den_theta(a * qp(2 - mr) / cr).den_theta(cr);
    for (std::size_t j = 0; j + 1 < inst.c.size(); ++j) {
        pref.num_theta(inst.c[j] * qp(inst.m[j])).num_theta(a * qp(1) / inst.c[j]);
        pref.den_theta(a * qp(1 - inst.m[j]) / inst.c[j]).den_theta(inst.c[j]);
    }
    std::vector<cplx> c2 = inst.c;
    for (cplx& cj : c2) cj *= qp(1);
    scaled tail = pref.value();
    tail *= detail::two_term_closed_form(a * qp(2), b * qp(1), c2, m1, inst.y, N, inst.base,
                                         delta);
    terms.push_back(-tail);
    return terms;
}

inline residual induction_step_residual(const two_term_instance& inst,
                                        double delta = default_zero_delta) {
    return residual_from_terms(induction_step_terms(inst, delta));
}

} // namespace ellipsum

#endif
