// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_THETA_HPP
#define ELLIPSUM_THETA_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>

#include "ellipsum/errors.hpp"
#include "ellipsum/residual.hpp"
#include "ellipsum/scaled.hpp"

namespace ellipsum {

using cplx = std::complex<double>;

// Truncation of the defining product stops at the first index J with
// |p|^(J+1) * max(|x|, 1/|x|, 1) < epsilon; every omitted factor then
// differs from 1 by less than epsilon.
struct truncation_policy {
    double epsilon = 1e-18;
    std::size_t max_terms = 2048;
};

// Minimum distance from the theta zero set {p^k : k integer} that callers
// must keep for any argument they intend to divide by.
inline constexpr double default_zero_delta = 1e-6;

class nome {
  public:
    explicit nome(cplx p, truncation_policy policy = {}, double guard = 0.9)
        : p_(p), policy_(policy), guard_(guard) {
        if (!(policy.epsilon > 0.0))
            throw nome_out_of_range("truncation epsilon must be positive");
        if (policy.max_terms < 1)
            throw nome_out_of_range("max_terms must be at least 1");
        if (!(std::abs(p) <= guard))
            throw nome_out_of_range("|p| = " + std::to_string(std::abs(p)) +
                                    " exceeds the guard " + std::to_string(guard));
    }

    cplx p() const { return p_; }
    const truncation_policy& policy() const { return policy_; }
    double guard() const { return guard_; }

  private:
    cplx p_;
    truncation_policy policy_;
    double guard_;
};

namespace detail {

// theta product with exact power-of-two rescaling; arguments of very large
// or very small magnitude stay representable.
inline scaled theta_scaled(cplx x, const nome& nm) {
    if (x == cplx{0.0, 0.0}) throw zero_argument{};
    const cplx p = nm.p();
    if (p == cplx{0.0, 0.0}) return scaled::from(1.0 - x);

    const double ax = std::abs(x);
    const double mag = std::max({ax, 1.0 / ax, 1.0});
    const double ap = std::abs(p);
    const double eps = nm.policy().epsilon;

    scaled acc = scaled::one();
    cplx pj = 1.0;       // p^j
    double apj1 = ap;    // |p|^(j+1)
    for (std::size_t j = 0; j < nm.policy().max_terms; ++j) {
        acc *= (1.0 - x * pj) * (1.0 - pj * p / x);
        if (apj1 * mag < eps) return acc;
        pj *= p;
        apj1 *= ap;
    }
    throw truncation_failure("theta product not converged within max_terms");
}

} // namespace detail

inline cplx theta(cplx x, const nome& nm) { return detail::theta_scaled(x, nm).value(); }

inline cplx theta_product(std::span<const cplx> xs, const nome& nm) {
    scaled acc = scaled::one();
    for (cplx x : xs) acc *= detail::theta_scaled(x, nm);
    return acc.value();
}

inline cplx theta_product(std::initializer_list<cplx> xs, const nome& nm) {
    return theta_product(std::span<const cplx>(xs.begin(), xs.size()), nm);
}

// Distance check against the zero set {p^k : k integer} (just {1} when
// p = 0).  For |x| below delta the spiral of zeros accumulating at the
// origin is treated as hit.
inline bool near_theta_zero(cplx x, const nome& nm, double delta = default_zero_delta) {
    const cplx p = nm.p();
    const double ax = std::abs(x);
    if (p == cplx{0.0, 0.0}) return std::abs(x - 1.0) < delta;
    if (ax < delta) return true;
    const double ap = std::abs(p);
    // candidate exponents: |p|^k must fall inside (|x|-delta, |x|+delta)
    const double lo = std::log(std::max(ax - delta, 1e-300)) / std::log(ap);
    const double hi = std::log(ax + delta) / std::log(ap);
    const long k_lo = static_cast<long>(std::floor(std::min(lo, hi))) - 1;
    const long k_hi = static_cast<long>(std::ceil(std::max(lo, hi))) + 1;
    cplx pk = std::pow(p, static_cast<double>(k_lo));
    for (long k = k_lo; k <= k_hi; ++k) {
        if (std::abs(x - pk) < delta) return true;
        pk *= p;
    }
    return false;
}

// Guarded evaluation for denominators.
inline scaled theta_denom(cplx x, const nome& nm, double delta = default_zero_delta) {
    if (near_theta_zero(x, nm, delta))
        throw division_by_zero_theta("theta denominator argument within delta of the zero set");
    return detail::theta_scaled(x, nm);
}

// theta(x) + x theta(1/x) = 0
inline residual residual_inversion(cplx x, const nome& nm) {
    residual_sum acc;
    acc.add(theta(x, nm));
    acc.add(x * theta(1.0 / x, nm));
    return acc.result();
}

// x theta(px) + theta(x) = 0, the quasi-periodicity of the product; needs p != 0.
inline residual residual_quasiperiod(cplx x, const nome& nm) {
    residual_sum acc;
    acc.add(x * theta(nm.p() * x, nm));
    acc.add(theta(x, nm));
    return acc.result();
}

// theta(xy, x/y, uv, u/v) - theta(xv, x/v, uy, u/y) - (u/y) theta(yv, y/v, xu, x/u) = 0
inline residual residual_addition(cplx x, cplx y, cplx u, cplx v, const nome& nm) {
    residual_sum acc;
    acc.add(theta_product({x * y, x / y, u * v, u / v}, nm));
    acc.add(-theta_product({x * v, x / v, u * y, u / y}, nm));
    acc.add(-(u / y) * theta_product({y * v, y / v, x * u, x / u}, nm));
    return acc.result();
}

} // namespace ellipsum

#endif
