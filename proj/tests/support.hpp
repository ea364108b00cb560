// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)
//
// Shared helpers for the test suites: deterministic parameter generators and
// the independent oracles the library results are checked against.

#ifndef ELLIPSUM_TESTS_SUPPORT_HPP
#define ELLIPSUM_TESTS_SUPPORT_HPP

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "ellipsum/inversion.hpp"
#include "ellipsum/theta.hpp"

namespace test_support {

using ellipsum::cplx;

inline cplx random_annulus(std::mt19937_64& gen, double r_lo = 0.3, double r_hi = 2.0) {
    std::uniform_real_distribution<double> mag(r_lo, r_hi);
    std::uniform_real_distribution<double> arg(0.0, 2.0 * std::numbers::pi);
    return std::polar(mag(gen), arg(gen));
}

inline cplx random_off_zeros(std::mt19937_64& gen, const ellipsum::nome& nm,
                             double r_lo = 0.3, double r_hi = 2.0,
                             double delta = ellipsum::default_zero_delta) {
    for (int t = 0; t < 1000; ++t) {
        const cplx x = random_annulus(gen, r_lo, r_hi);
        if (!ellipsum::near_theta_zero(x, nm, delta)) return x;
    }
    throw std::runtime_error("test annulus saturated");
}

// Independent long-product oracle: a fixed 100-factor partial product of the
// defining theta product, no truncation logic involved.
inline cplx theta_oracle(cplx x, cplx p, int terms = 100) {
    cplx acc = 1.0;
    cplx pj = 1.0;
    for (int j = 0; j < terms; ++j) {
        acc *= (1.0 - x * pj) * (1.0 - pj * p / x);
        pj *= p;
    }
    return acc;
}

// Dense forward-substitution inverse of a unit lower-triangular window; the
// linear-algebra oracle the closed-form g entries are compared against.
inline ellipsum::matrix_window invert_unit_lower(const ellipsum::matrix_window& f) {
    const int l0 = f.lower(), n0 = f.upper();
    ellipsum::matrix_window inv(l0, n0);
    for (int col = l0; col <= n0; ++col) {
        inv.at(col, col) = 1.0;
        for (int row = col + 1; row <= n0; ++row) {
            cplx sum{0.0, 0.0};
            for (int k = col; k < row; ++k) sum += f.at(row, k) * inv.at(k, col);
            inv.at(row, col) = -sum; // f has a unit diagonal
        }
    }
    return inv;
}

inline double rel_err(cplx got, cplx want) {
    const double scale = std::max(std::abs(got), std::abs(want));
    return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

inline std::vector<ellipsum::cplx> random_sequence(std::mt19937_64& gen, int n,
                                                   double r_lo = 0.3, double r_hi = 2.0) {
    std::vector<cplx> out;
    for (int j = 0; j < n; ++j) out.push_back(random_annulus(gen, r_lo, r_hi));
    return out;
}

// Retries sequence construction until the delta-exclusion accepts it.
inline ellipsum::sequence_pair random_sequence_pair(std::mt19937_64& gen, int size,
                                                    const ellipsum::nome& nm) {
    for (int t = 0; t < 1000; ++t) {
        try {
            return ellipsum::sequence_pair(0, random_sequence(gen, size),
                                           random_sequence(gen, size), nm);
        } catch (const ellipsum::division_by_zero_theta&) {
        }
    }
    throw std::runtime_error("could not sample a sequence window");
}

} // namespace test_support

#endif
