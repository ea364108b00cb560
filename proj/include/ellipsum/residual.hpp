// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_RESIDUAL_HPP
#define ELLIPSUM_RESIDUAL_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "ellipsum/scaled.hpp"

namespace ellipsum {

// Cancellation-aware figure of merit for a sum that should vanish: the
// signed total against the total magnitude that was available to cancel.
// `scale >= |value|` is deliberately not an invariant.
struct residual {
    std::complex<double> value{0.0, 0.0}; // signed sum (or LHS - RHS)
    double scale = 0.0;                   // sum of all term magnitudes, both sides
    double relative = 0.0;                // |value| / scale, 0 when scale == 0
};

// Accumulates flattened terms of an identity and produces the residual.
class residual_sum {
  public:
    void add(std::complex<double> term) { add(scaled::from(term)); }
    void add(const scaled& term) {
        value_.add(term);
        scale_.add(scaled{{std::abs(term.mant), 0.0}, term.exp2});
    }

    residual result() const {
        scaled v = value_.total();
        scaled s = scale_.total();
        residual r;
        r.value = v.value();
        r.scale = s.value().real();
        if (s.mant.real() > 0.0) {
            // form |v|/s in scaled space so huge/tiny magnitudes stay exact
            double ratio = std::abs(v.mant) / s.mant.real();
            r.relative = std::ldexp(ratio, clamp_exp(v.exp2 - s.exp2));
        }
        return r;
    }

  private:
    static int clamp_exp(std::int64_t e) {
        return e > 60000 ? 60000 : (e < -60000 ? -60000 : static_cast<int>(e));
    }
    scaled_sum value_;
    scaled_sum scale_;
};

inline residual residual_from_terms(const std::vector<scaled>& terms) {
    residual_sum acc;
    for (const auto& t : terms) acc.add(t);
    return acc.result();
}

inline const residual& worse(const residual& a, const residual& b) {
    return b.relative > a.relative ? b : a;
}

} // namespace ellipsum

#endif
