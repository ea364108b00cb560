// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_OPERATOR_METHOD_HPP
#define ELLIPSUM_OPERATOR_METHOD_HPP

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ellipsum/errors.hpp"
#include "ellipsum/inversion.hpp"
#include "ellipsum/laurent.hpp"
#include "ellipsum/residual.hpp"
#include "ellipsum/theta.hpp"

namespace ellipsum {

// Sequence window plus the auxiliary multiplier variables u, v.  Construction
// checks that every theta value that ends up in a denominator of the w_k
// multipliers or the column normalization stays off the zero set, and that
// the w_k are pairwise distinct (the operator lemma needs distinct nonzero
// eigenvalue ratios).
class operator_context {
  public:
    operator_context(sequence_pair seq, cplx u, cplx v,
                     double w_separation = 1e-8)
        : seq_(std::move(seq)), u_(u), v_(v) {
        const nome& nm = seq_.base_nome();
        const double delta = seq_.delta();
        if (near_theta_zero(u * v, nm, delta) || near_theta_zero(u / v, nm, delta))
            throw division_by_zero_theta("theta(uv) or theta(u/v) within delta of zero");
        std::vector<cplx> ws;
        for (int k = seq_.j_min(); k <= seq_.j_max(); ++k) {
            const cplx ck = seq_.c(k);
            for (cplx arg : {u * ck, u / ck, ck * v, ck / v})
                if (near_theta_zero(arg, nm, delta))
                    throw division_by_zero_theta(
                        "multiplier theta argument within delta of zero at k = " +
                        std::to_string(k));
            ws.push_back(w_multiplier(k));
        }
        for (std::size_t i = 0; i < ws.size(); ++i)
            for (std::size_t j = i + 1; j < ws.size(); ++j)
                if (std::abs(ws[i] - ws[j]) <= w_separation)
                    throw degenerate_spectrum("w_k multipliers closer than the separation bound");
    }

    const sequence_pair& seq() const { return seq_; }
    cplx u() const { return u_; }
    cplx v() const { return v_; }

    // w_k = u theta(v c_k, c_k / v) / [c_k theta(u c_k, u / c_k)]
    cplx w_multiplier(int k) const {
        const nome& nm = seq_.base_nome();
        const cplx ck = seq_.c(k);
        scaled w = detail::theta_scaled(v_ * ck, nm) * detail::theta_scaled(ck / v_, nm);
        w *= u_ / ck;
        w /= theta_denom(u_ * ck, nm, seq_.delta()) * theta_denom(u_ / ck, nm, seq_.delta());
        return w.value();
    }

  private:
    sequence_pair seq_;
    cplx u_, v_;
};

// Diagonal operator acting as z^k -> weight(s_k) z^k, where s is the a- or
// c-sequence; the adjoint acts on z^{-k} the same way.
struct diagonal_spec {
    enum class source { a, c };
    source which = source::a;
    std::function<cplx(cplx)> weight;
};

inline diagonal_spec theta_pair_diagonal(diagonal_spec::source which, cplx w, const nome& nm) {
    return {which, [w, nm](cplx x) { return theta(x * w, nm) * theta(x / w, nm); }};
}

// Applies the diagonal to every stored coefficient.  In adjoint mode the
// window is understood in z^{-l} form: the coefficient at exponent m carries
// sequence index -m.
inline laurent_window apply_diagonal(const diagonal_spec& spec, const operator_context& ctx,
                                     const laurent_window& w, bool adjoint = false) {
    std::vector<cplx> c(static_cast<std::size_t>(w.hi() - w.lo() + 1));
    for (int m = w.lo(); m <= w.hi(); ++m) {
        const int idx = adjoint ? -m : m;
        const cplx s = spec.which == diagonal_spec::source::a ? ctx.seq().a(idx)
                                                              : ctx.seq().c(idx);
        c[static_cast<std::size_t>(m - w.lo())] = spec.weight(s) * w.at(m);
    }
    return laurent_window(w.lo(), std::move(c), w.margin());
}

// f_k(z) = sum_{n >= k} f_nk z^n truncated to the sequence window, with two
// exact zero coefficients below the support when the window allows it.
inline laurent_window build_f_column(const operator_context& ctx, int k, int pad_below = 2) {
    const sequence_pair& seq = ctx.seq();
    if (k < seq.j_min() || k > seq.j_max())
        throw index_out_of_sequence_window("column index outside sequence window");
    const int lo = std::max(seq.j_min(), k - pad_below);
    std::vector<cplx> c;
    for (int n = lo; n <= seq.j_max(); ++n)
        c.push_back(n < k ? cplx{0.0, 0.0} : f_entry(seq, n, k));
    return laurent_window(lo, std::move(c), 0);
}

// h_kl = prod_{j=l}^{k-1} theta(a_j c_k, a_j/c_k) / theta(c_j c_k, c_j/c_k), h_kk = 1
inline cplx h_closed_form(const operator_context& ctx, int k, int l) {
    if (l > k) throw constraint_violated("h_closed_form needs l <= k");
    const sequence_pair& seq = ctx.seq();
    const nome& nm = seq.base_nome();
    const cplx ck = seq.c(k);
    scaled acc = scaled::one();
    for (int j = l; j < k; ++j) {
        acc *= detail::theta_scaled(seq.a(j) * ck, nm) * detail::theta_scaled(seq.a(j) / ck, nm);
        acc /= theta_denom(seq.c(j) * ck, nm, seq.delta()) *
               theta_denom(seq.c(j) / ck, nm, seq.delta());
    }
    return acc.value();
}

// h_k(z) = sum_{l <= k} h_kl z^{-l} stored over exponents m = -l; the window
// covers l = l_min .. k plus two exact zeros above the support.
inline laurent_window build_h_column(const operator_context& ctx, int k, int l_min,
                                     int pad_above = 2) {
    const sequence_pair& seq = ctx.seq();
    if (l_min > k) throw constraint_violated("h column needs l_min <= k");
    const int top = std::min(k + pad_above, seq.j_max());
    std::vector<cplx> c;
    for (int m = -top; m <= -l_min; ++m) {
        const int l = -m;
        c.push_back(l > k ? cplx{0.0, 0.0} : h_closed_form(ctx, k, l));
    }
    return laurent_window(-top, std::move(c), 0);
}

// theta(c_n c_k, c_n/c_k) f_nk = theta(a_{n-1} c_k, a_{n-1}/c_k) f_{n-1,k}
inline residual column_recurrence_residual(const operator_context& ctx, int k, int n_lo,
                                           int n_hi) {
    const sequence_pair& seq = ctx.seq();
    const nome& nm = seq.base_nome();
    const cplx ck = seq.c(k);
    residual worst;
    for (int n = n_lo; n <= n_hi; ++n) {
        residual_sum acc;
        acc.add(theta_product({seq.c(n) * ck, seq.c(n) / ck}, nm) * f_entry(seq, n, k));
        acc.add(-theta_product({seq.a(n - 1) * ck, seq.a(n - 1) / ck}, nm) *
                f_entry(seq, n - 1, k));
        worst = worse(worst, acc.result());
    }
    return worst;
}

enum class functional_route {
    operator_form, // the separated form with the w_k multiplier
    addition_form  // the theta(uv, u/v)-multiplied form it came from
};

// Coefficientwise check of U f_k = w_k V f_k on trusted indices, where
// U = theta(Cv, C/v) - z theta(Av, A/v) and V = z theta(Au, A/u) - theta(Cu, C/u).
inline residual functional_eq_residual(const operator_context& ctx, int k,
                                       functional_route route = functional_route::operator_form) {
    const nome& nm = ctx.seq().base_nome();
    const laurent_window f = build_f_column(ctx, k);
    const auto diag = [&](diagonal_spec::source s, cplx w) {
        return apply_diagonal(theta_pair_diagonal(s, w, nm), ctx, f, false);
    };
    const laurent_window cv = diag(diagonal_spec::source::c, ctx.v());
    const laurent_window av = apply_shift(diag(diagonal_spec::source::a, ctx.v()));
    const laurent_window au = apply_shift(diag(diagonal_spec::source::a, ctx.u()));
    const laurent_window cu = diag(diagonal_spec::source::c, ctx.u());
    const cplx wk = ctx.w_multiplier(k);

    residual worst;
    for (int m = f.lo(); m <= f.hi(); ++m) {
        if (!cv.trusted(m) || !av.trusted(m) || !au.trusted(m) || !cu.trusted(m)) continue;
        residual_sum acc;
        if (route == functional_route::operator_form) {
            acc.add(cv.at(m));
            acc.add(-av.at(m));
            acc.add(-wk * au.at(m));
            acc.add(wk * cu.at(m));
        } else {
            // before separating variables: theta(u c_k, u/c_k) [U f]
            //   + (u/c_k) theta(v c_k, c_k/v) [-V f]
            const cplx ck = ctx.seq().c(k);
            const cplx mu = theta_product({ctx.u() * ck, ctx.u() / ck}, nm);
            const cplx mv = (ctx.u() / ck) * theta_product({ctx.v() * ck, ck / ctx.v()}, nm);
            acc.add(mu * cv.at(m));
            acc.add(-mu * av.at(m));
            acc.add(-mv * au.at(m));
            acc.add(mv * cu.at(m));
        }
        worst = worse(worst, acc.result());
    }
    return worst;
}

// Dual system on h_k(z): [theta(C*v, C*/v) - theta(A*v, A*/v) z] h_k
//   = w_k [theta(A*u, A*/u) z - theta(C*u, C*/u)] h_k.
inline residual dual_eq_residual(const operator_context& ctx, int k, int l_min) {
    const nome& nm = ctx.seq().base_nome();
    const laurent_window h = build_h_column(ctx, k, l_min);
    const auto adiag = [&](const laurent_window& w, diagonal_spec::source s, cplx x) {
        return apply_diagonal(theta_pair_diagonal(s, x, nm), ctx, w, true);
    };
    const laurent_window zh = apply_shift(h);
    const laurent_window cv = adiag(h, diagonal_spec::source::c, ctx.v());
    const laurent_window av = adiag(zh, diagonal_spec::source::a, ctx.v());
    const laurent_window au = adiag(zh, diagonal_spec::source::a, ctx.u());
    const laurent_window cu = adiag(h, diagonal_spec::source::c, ctx.u());
    const cplx wk = ctx.w_multiplier(k);

    residual worst;
    for (int m = h.lo(); m <= h.hi(); ++m) {
        if (!cv.trusted(m) || !av.trusted(m) || !au.trusted(m) || !cu.trusted(m)) continue;
        residual_sum acc;
        acc.add(cv.at(m));
        acc.add(-av.at(m));
        acc.add(-wk * au.at(m));
        acc.add(wk * cu.at(m));
        worst = worse(worst, acc.result());
    }
    return worst;
}

// The z^{-l} coefficient of V* h_k(z) admits two routes: the operator form
// theta(a_l u, a_l/u) h_{k,l+1} - theta(c_l u, c_l/u) h_kl, and the addition-
// formula reduction (a_l / c_k) theta(c_k u, c_k/u) theta(a_l c_l, c_l/a_l)
// h_kl / theta(a_l c_k, a_l/c_k).
inline residual vstar_coefficient_residual(const operator_context& ctx, int k, int l) {
    const sequence_pair& seq = ctx.seq();
    const nome& nm = seq.base_nome();
    const cplx u = ctx.u();
    const cplx al = seq.a(l), cl = seq.c(l), ck = seq.c(k);
    const scaled hl = scaled::from(h_closed_form(ctx, k, l));
    const scaled hl1 = scaled::from(l + 1 > k ? cplx{0.0, 0.0} : h_closed_form(ctx, k, l + 1));

    scaled reduced = detail::theta_scaled(ck * u, nm) * detail::theta_scaled(ck / u, nm);
    reduced *= detail::theta_scaled(al * cl, nm) * detail::theta_scaled(cl / al, nm);
    reduced *= al / ck;
    reduced /= theta_denom(al * ck, nm, seq.delta()) * theta_denom(al / ck, nm, seq.delta());
    reduced *= hl;

    residual_sum acc;
    acc.add(scaled::from(theta_product({al * u, al / u}, nm)) * hl1);
    acc.add(-(scaled::from(theta_product({cl * u, cl / u}, nm)) * hl));
    acc.add(-reduced);
    return acc.result();
}

// g_k(z) = V* h_k(z) / <f_k, V* h_k>; extracting coefficients of z^{-l}
// recovers the inverse-matrix entries g_kl.  The normalizing pairing equals
// -theta(c_k u, c_k/u), so the result does not depend on (u, v).
// Needs l_min >= j_min + 1 (the adjoint of the shift consults index l_min - 1)
// and k <= j_max - 2 so the support top stays inside the sequence window.
inline std::map<int, cplx> reconstruct_g(const operator_context& ctx, int k, int l_min) {
    const nome& nm = ctx.seq().base_nome();
    const laurent_window h = build_h_column(ctx, k, l_min);
    const auto adiag = [&](const laurent_window& w, diagonal_spec::source s, cplx x) {
        return apply_diagonal(theta_pair_diagonal(s, x, nm), ctx, w, true);
    };
    const laurent_window au = adiag(apply_shift(h), diagonal_spec::source::a, ctx.u());
    const laurent_window cu = adiag(h, diagonal_spec::source::c, ctx.u());

    // V* h_k assembled on its exact support [-k, -l_min]: V* h has no
    // exponents below -k, so the rebuilt window is margin-free even though
    // the shifted component carries one.
    std::vector<cplx> c;
    for (int m = -k; m <= -l_min; ++m) {
        if (!au.trusted(m) || !cu.trusted(m))
            throw insufficient_window("V*h coefficient at z^" + std::to_string(m) +
                                      " untrusted; widen the h window");
        c.push_back(au.at(m) - cu.at(m));
    }
    laurent_window vh(-k, std::move(c), 0);

    const laurent_window f = build_f_column(ctx, k);
    const cplx norm = pairing(f, vh);
    if (std::abs(norm) == 0.0)
        throw division_by_zero_theta("degenerate normalization in g reconstruction");

    std::map<int, cplx> g;
    for (int l = l_min; l <= k; ++l) g[l] = vh.at(-l) / norm;
    return g;
}

} // namespace ellipsum

#endif
