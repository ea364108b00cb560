// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_RNG_HPP
#define ELLIPSUM_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace ellipsum {

// Counter-based generator keyed by (seed, stream name, trial).  Every draw
// is a pure function of the key and a counter, so trials are reproducible
// and independent regardless of evaluation order.
class rng {
  public:
    rng(std::uint64_t seed, std::string_view stream, std::uint64_t trial) {
        std::uint64_t h = mix(seed ^ 0x9e3779b97f4a7c15ULL);
        h = mix(h ^ fnv1a(stream));
        key_ = mix(h ^ mix(trial));
    }

    std::uint64_t next_u64() {
        ctr_ += 0x9e3779b97f4a7c15ULL;
        return mix(key_ ^ ctr_);
    }

    // uniform in [0, 1)
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [lo, hi] inclusive
    int next_int(int lo, int hi) {
        if (hi <= lo) return lo;
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // magnitude uniform on [r_lo, r_hi], argument uniform
    std::complex<double> next_annulus(double r_lo, double r_hi) {
        const double r = next_real(r_lo, r_hi);
        const double phi = next_real(0.0, 2.0 * std::numbers::pi);
        return std::polar(r, phi);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 1469598103934665603ULL;
        for (char ch : s) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ULL;
        }
        return h;
    }

    std::uint64_t key_ = 0;
    std::uint64_t ctr_ = 0;
};

} // namespace ellipsum

#endif
