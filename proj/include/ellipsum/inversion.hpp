// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_INVERSION_HPP
#define ELLIPSUM_INVERSION_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ellipsum/errors.hpp"
#include "ellipsum/theta.hpp"

namespace ellipsum {

// Finite window of the two sequences (a_j), (c_j) feeding the inverse pair.
// Construction rejects entries whose pairwise products c_j c_k / quotients
// c_j / c_k fall within delta of the theta zero set: those are exactly the
// denominators of the f- and g-entries.
class sequence_pair {
  public:
    sequence_pair(int j_min, std::vector<cplx> a, std::vector<cplx> c, nome nm,
                  double delta = default_zero_delta)
        : j_min_(j_min), a_(std::move(a)), c_(std::move(c)), nome_(nm), delta_(delta) {
        if (a_.size() != c_.size() || a_.empty())
            throw bad_arity("sequence windows must be nonempty and of equal length");
        for (const cplx& v : a_)
            if (v == cplx{0.0, 0.0}) throw zero_argument{};
        for (const cplx& v : c_)
            if (v == cplx{0.0, 0.0}) throw zero_argument{};
        for (std::size_t j = 0; j < c_.size(); ++j)
            for (std::size_t k = 0; k < c_.size(); ++k) {
                if (j == k) continue;
                if (near_theta_zero(c_[j] * c_[k], nome_, delta_) ||
                    near_theta_zero(c_[j] / c_[k], nome_, delta_))
                    throw division_by_zero_theta(
                        "sequence window places a c_j c_k or c_j/c_k on the theta zero set");
            }
    }

    int j_min() const { return j_min_; }
    int j_max() const { return j_min_ + static_cast<int>(a_.size()) - 1; }
    const nome& base_nome() const { return nome_; }
    double delta() const { return delta_; }

    cplx a(int j) const { return fetch(a_, j, "a"); }
    cplx c(int j) const { return fetch(c_, j, "c"); }

  private:
    cplx fetch(const std::vector<cplx>& v, int j, const char* which) const {
        if (j < j_min_ || j > j_max())
            throw index_out_of_sequence_window(std::string("sequence ") + which + " index " +
                                               std::to_string(j) + " outside window");
        return v[static_cast<std::size_t>(j - j_min_)];
    }
    int j_min_;
    std::vector<cplx> a_, c_;
    nome nome_;
    double delta_;
};

// f_nk = prod_{j=k}^{n-1} theta(a_j c_k) theta(a_j / c_k)
//      / prod_{j=k+1}^{n} theta(c_j c_k) theta(c_j / c_k),   f_kk = 1
inline cplx f_entry(const sequence_pair& seq, int n, int k) {
    if (n < k) throw constraint_violated("f_entry needs n >= k");
    if (n == k) return 1.0;
    const nome& nm = seq.base_nome();
    scaled acc = scaled::one();
    const cplx ck = seq.c(k);
    for (int j = k; j < n; ++j) {
        const cplx aj = seq.a(j);
        acc *= detail::theta_scaled(aj * ck, nm) * detail::theta_scaled(aj / ck, nm);
    }
    for (int j = k + 1; j <= n; ++j) {
        const cplx cj = seq.c(j);
        acc /= theta_denom(cj * ck, nm, seq.delta()) * theta_denom(cj / ck, nm, seq.delta());
    }
    return acc.value();
}

// g_kl = c_l theta(a_l c_l) theta(a_l/c_l) / [c_k theta(a_k c_k) theta(a_k/c_k)]
//      * prod_{j=l+1}^{k} theta(a_j c_k) theta(a_j/c_k)
//      / prod_{j=l}^{k-1} theta(c_j c_k) theta(c_j/c_k),      g_kk = 1
inline cplx g_entry(const sequence_pair& seq, int k, int l) {
    if (k < l) throw constraint_violated("g_entry needs k >= l");
    if (k == l) return 1.0;
    const nome& nm = seq.base_nome();
    const cplx ck = seq.c(k);
    scaled acc = detail::theta_scaled(seq.a(l) * seq.c(l), nm) *
                 detail::theta_scaled(seq.a(l) / seq.c(l), nm);
    acc *= seq.c(l) / ck;
    acc /= theta_denom(seq.a(k) * ck, nm, seq.delta()) *
           theta_denom(seq.a(k) / ck, nm, seq.delta());
    for (int j = l + 1; j <= k; ++j) {
        const cplx aj = seq.a(j);
        acc *= detail::theta_scaled(aj * ck, nm) * detail::theta_scaled(aj / ck, nm);
    }
    for (int j = l; j < k; ++j) {
        const cplx cj = seq.c(j);
        acc /= theta_denom(cj * ck, nm, seq.delta()) * theta_denom(cj / ck, nm, seq.delta());
    }
    return acc.value();
}

// Lower-triangular window of entries over l0 <= col <= row <= n0.
class matrix_window {
  public:
    matrix_window(int l0, int n0) : l0_(l0), n0_(n0) {
        if (n0 < l0) throw constraint_violated("matrix window needs n0 >= l0");
        const std::size_t n = static_cast<std::size_t>(n0 - l0 + 1);
        rows_.resize(n * (n + 1) / 2, cplx{0.0, 0.0});
    }

    int lower() const { return l0_; }
    int upper() const { return n0_; }

    cplx& at(int row, int col) { return rows_[index(row, col)]; }
    cplx at(int row, int col) const { return rows_[index(row, col)]; }

  private:
    std::size_t index(int row, int col) const {
        if (row < l0_ || row > n0_ || col < l0_ || col > row)
            throw constraint_violated("matrix window index outside lower triangle");
        const std::size_t r = static_cast<std::size_t>(row - l0_);
        return r * (r + 1) / 2 + static_cast<std::size_t>(col - l0_);
    }
    int l0_, n0_;
    std::vector<cplx> rows_;
};

inline matrix_window f_window(const sequence_pair& seq, int l0, int n0) {
    matrix_window w(l0, n0);
    for (int n = l0; n <= n0; ++n)
        for (int k = l0; k <= n; ++k) w.at(n, k) = f_entry(seq, n, k);
    return w;
}

inline matrix_window g_window(const sequence_pair& seq, int l0, int n0) {
    matrix_window w(l0, n0);
    for (int k = l0; k <= n0; ++k)
        for (int l = l0; l <= k; ++l) w.at(k, l) = g_entry(seq, k, l);
    return w;
}

enum class orthogonality { wmi, pmi };

// Largest deviation of sum_k f_nk g_kl (wmi) or sum_k g_nk f_kl (pmi) from
// delta_nl over the window, each sum scaled by its term magnitudes.
inline residual orthogonality_residual(const sequence_pair& seq, int l0, int n0,
                                       orthogonality which) {
    const matrix_window f = f_window(seq, l0, n0);
    const matrix_window g = g_window(seq, l0, n0);
    residual worst;
    for (int n = l0; n <= n0; ++n)
        for (int l = l0; l <= n; ++l) {
            residual_sum acc;
            for (int k = l; k <= n; ++k)
                acc.add(which == orthogonality::wmi ? f.at(n, k) * g.at(k, l)
                                                    : g.at(n, k) * f.at(k, l));
            if (n == l) acc.add(cplx{-1.0, 0.0});
            worst = worse(worst, acc.result());
        }
    return worst;
}

// sum_k a_k prod_j theta(a_k b_j) theta(a_k/b_j)
//            / prod_{j != k} theta(a_k a_j) theta(a_k/a_j) = 0,  n >= 2
inline residual gustafson_residual(std::span<const cplx> a, std::span<const cplx> b,
                                   const nome& nm, double delta = default_zero_delta) {
    const std::size_t n = a.size();
    if (n < 2) throw bad_arity("gustafson sum needs n >= 2");
    if (b.size() + 2 != n) throw bad_arity("gustafson sum needs n - 2 poles");
    residual_sum acc;
    for (std::size_t k = 0; k < n; ++k) {
        scaled term = scaled::from(a[k]);
        for (const cplx& bj : b)
            term *= detail::theta_scaled(a[k] * bj, nm) * detail::theta_scaled(a[k] / bj, nm);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            term /= theta_denom(a[k] * a[j], nm, delta) * theta_denom(a[k] / a[j], nm, delta);
        }
        acc.add(term);
    }
    return acc.result();
}

// sum_{k=l}^{n} (1/c_k) prod_{j=l+1}^{n-1} theta(a_j c_k) theta(a_j/c_k)
//             / prod_{j=l, j != k}^{n} theta(c_j c_k) theta(c_j/c_k) = 0,  n > l
inline residual mipf_residual(const sequence_pair& seq, int l, int n) {
    if (n <= l) throw constraint_violated("mipf needs n > l");
    const nome& nm = seq.base_nome();
    residual_sum acc;
    for (int k = l; k <= n; ++k) {
        const cplx ck = seq.c(k);
        scaled term = scaled::from(1.0 / ck);
        for (int j = l + 1; j <= n - 1; ++j) {
            const cplx aj = seq.a(j);
            term *= detail::theta_scaled(aj * ck, nm) * detail::theta_scaled(aj / ck, nm);
        }
        for (int j = l; j <= n; ++j) {
            if (j == k) continue;
            const cplx cj = seq.c(j);
            term /= theta_denom(cj * ck, nm, seq.delta()) * theta_denom(cj / ck, nm, seq.delta());
        }
        acc.add(term);
    }
    return acc.result();
}

// sum_k prod_j theta(a_k/b_j) / prod_{j != k} theta(a_k/a_j) = 0,
// subject to a_1 ... a_n = b_1 ... b_n
inline residual tannery_molk_residual(std::span<const cplx> a, std::span<const cplx> b,
                                      const nome& nm, double delta = default_zero_delta,
                                      double product_tol = 1e-12) {
    const std::size_t n = a.size();
    if (n == 0 || b.size() != n) throw bad_arity("partial fraction sum needs equal nonempty lists");
    cplx pa = 1.0, pb = 1.0;
    for (const cplx& v : a) pa *= v;
    for (const cplx& v : b) pb *= v;
    if (std::abs(pa - pb) > product_tol * std::max(std::abs(pa), std::abs(pb)))
        throw constraint_violated("product condition prod a = prod b fails");
    residual_sum acc;
    for (std::size_t k = 0; k < n; ++k) {
        scaled term = scaled::one();
        for (const cplx& bj : b) term *= detail::theta_scaled(a[k] / bj, nm);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == k) continue;
            term /= theta_denom(a[k] / a[j], nm, delta);
        }
        acc.add(term);
    }
    return acc.result();
}

} // namespace ellipsum

#endif
