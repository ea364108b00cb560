// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_SCALED_HPP
#define ELLIPSUM_SCALED_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace ellipsum {

// Complex number in the form mant * 2^exp2.  Long products of theta values
// can leave the double range even when the quantities they combine into are
// O(1); rescaling by powers of two is exact, so nothing is lost by carrying
// the exponent separately.
struct scaled {
    std::complex<double> mant{0.0, 0.0};
    std::int64_t exp2 = 0;

    static scaled from(std::complex<double> v) {
        scaled s{v, 0};
        s.normalize();
        return s;
    }
    static scaled one() { return scaled{{1.0, 0.0}, 0}; }

    void normalize() {
        double m = std::abs(mant);
        if (m == 0.0 || !std::isfinite(m)) {
            exp2 = 0;
            return;
        }
        // keep |mant| within [2^-256, 2^256)
        while (m >= 0x1p+256) {
            mant = {std::ldexp(mant.real(), -256), std::ldexp(mant.imag(), -256)};
            exp2 += 256;
            m = std::ldexp(m, -256);
        }
        while (m < 0x1p-256) {
            mant = {std::ldexp(mant.real(), 256), std::ldexp(mant.imag(), 256)};
            exp2 -= 256;
            m = std::ldexp(m, 256);
        }
    }

    scaled& operator*=(const scaled& o) {
        mant *= o.mant;
        exp2 += o.exp2;
        normalize();
        return *this;
    }
    scaled& operator*=(std::complex<double> v) {
        mant *= v;
        normalize();
        return *this;
    }
    scaled& operator/=(const scaled& o) {
        mant /= o.mant;
        exp2 -= o.exp2;
        normalize();
        return *this;
    }
    scaled& operator/=(std::complex<double> v) {
        mant /= v;
        normalize();
        return *this;
    }
    scaled operator-() const { return scaled{-mant, exp2}; }

    // materialize; overflows to inf / underflows to 0 outside double range
    std::complex<double> value() const {
        if (exp2 == 0) return mant;
        int e = exp2 > 60000 ? 60000 : (exp2 < -60000 ? -60000 : static_cast<int>(exp2));
        return {std::ldexp(mant.real(), e), std::ldexp(mant.imag(), e)};
    }
    double abs2exp(std::int64_t* e) const {
        *e = exp2;
        return std::abs(mant);
    }
};

inline scaled operator*(scaled a, const scaled& b) { return a *= b; }
inline scaled operator/(scaled a, const scaled& b) { return a /= b; }

// Sum of scaled values, rebased on the fly to the largest exponent seen.
// Contributions more than ~300 binary orders below the running maximum
// cannot affect a double result and drop out naturally.
class scaled_sum {
  public:
    void add(const scaled& t) {
        if (t.mant == std::complex<double>{0.0, 0.0}) return;
        if (empty_) {
            acc_ = t.mant;
            exp2_ = t.exp2;
            empty_ = false;
            return;
        }
        if (t.exp2 > exp2_) {
            acc_ = shift(acc_, exp2_ - t.exp2);
            exp2_ = t.exp2;
            acc_ += t.mant;
        } else {
            acc_ += shift(t.mant, t.exp2 - exp2_);
        }
        double m = std::abs(acc_);
        if (m >= 0x1p+256 && std::isfinite(m)) {
            acc_ = shift(acc_, -256);
            exp2_ += 256;
        }
    }
    scaled total() const {
        scaled s{acc_, exp2_};
        s.normalize();
        return s;
    }

  private:
    static std::complex<double> shift(std::complex<double> v, std::int64_t d) {
        int e = d < -60000 ? -60000 : static_cast<int>(d);
        return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
    }
    std::complex<double> acc_{0.0, 0.0};
    std::int64_t exp2_ = 0;
    bool empty_ = true;
};

} // namespace ellipsum

#endif
