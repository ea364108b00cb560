// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_POCHHAMMER_HPP
#define ELLIPSUM_POCHHAMMER_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <string>

#include "ellipsum/errors.hpp"
#include "ellipsum/theta.hpp"

namespace ellipsum {

// Integer power by repeated squaring; multiplication-only, so no complex
// branch is ever selected and results are bit-reproducible.
inline cplx ipow(cplx base, std::int64_t n) {
    if (n < 0) return 1.0 / ipow(base, -n);
    cplx acc = 1.0;
    cplx sq = base;
    while (n > 0) {
        if (n & 1) acc *= sq;
        sq *= sq;
        n >>= 1;
    }
    return acc;
}

// Primitive base q* with q = q*^Y.  Y is a common multiple of all root
// orders y_j in play, so every fractional power q^(k/y_j) is an exact
// integer power of q*.
class refined_base {
  public:
    refined_base(cplx q_star, int refinement, nome nm)
        : q_star_(q_star), y_(refinement), nome_(nm) {
        if (q_star == cplx{0.0, 0.0})
            throw constraint_violated("refined base q* must be nonzero");
        if (refinement < 1)
            throw constraint_violated("refinement Y must be at least 1");
    }

    cplx q_star() const { return q_star_; }
    int refinement() const { return y_; }
    cplx q() const { return ipow(q_star_, y_); }
    // q*^n, i.e. q^(n/Y)
    cplx power(std::int64_t n) const { return ipow(q_star_, n); }
    const nome& base_nome() const { return nome_; }

  private:
    cplx q_star_;
    int y_;
    nome nome_;
};

// One elliptic shifted factorial (a; q*^step)_length.  step = Y gives base q,
// step = Y/y_j gives base q^(1/y_j).  Negative lengths use the convention
// (a; q)_{-n} = 1 / (a q^{-n}; q)_n.
struct factorial_arg {
    cplx a;
    int step = 1;
    int length = 0;
};

namespace detail {

inline void check_factorial(const factorial_arg& arg) {
    if (arg.a == cplx{0.0, 0.0}) throw zero_argument{};
    if (arg.step < 1) throw constraint_violated("factorial step must be >= 1");
}

inline scaled factorial_scaled(const factorial_arg& arg, const refined_base& base,
                               double delta = default_zero_delta) {
    check_factorial(arg);
    const nome& nm = base.base_nome();
    const cplx qs = base.power(arg.step);
    if (arg.length >= 0) {
        scaled acc = scaled::one();
        cplx x = arg.a;
        for (int t = 0; t < arg.length; ++t) {
            acc *= theta_scaled(x, nm);
            x *= qs;
        }
        return acc;
    }
    // the shifted arguments a q^{-1}, ..., a q^{length} sit in a denominator
    scaled acc = scaled::one();
    cplx x = arg.a * base.power(static_cast<std::int64_t>(arg.step) * arg.length);
    for (int t = 0; t < -arg.length; ++t) {
        acc *= theta_denom(x, nm, delta);
        x *= qs;
    }
    return scaled::one() / acc;
}

// Denominator variant: every factor is checked against the zero set.
inline scaled factorial_denom_scaled(const factorial_arg& arg, const refined_base& base,
                                     double delta = default_zero_delta) {
    check_factorial(arg);
    if (arg.length < 0) return scaled::one() / factorial_scaled({arg.a, arg.step, -arg.length}, base, delta);
    const nome& nm = base.base_nome();
    const cplx qs = base.power(arg.step);
    scaled acc = scaled::one();
    cplx x = arg.a;
    for (int t = 0; t < arg.length; ++t) {
        acc *= theta_denom(x, nm, delta);
        x *= qs;
    }
    return acc;
}

} // namespace detail

inline cplx shifted_factorial(const factorial_arg& arg, const refined_base& base,
                              double delta = default_zero_delta) {
    return detail::factorial_scaled(arg, base, delta).value();
}

inline cplx shifted_factorial_product(std::span<const factorial_arg> args,
                                      const refined_base& base,
                                      double delta = default_zero_delta) {
    scaled acc = scaled::one();
    for (const auto& arg : args) acc *= detail::factorial_scaled(arg, base, delta);
    return acc.value();
}

inline cplx shifted_factorial_product(std::initializer_list<factorial_arg> args,
                                      const refined_base& base,
                                      double delta = default_zero_delta) {
    return shifted_factorial_product(std::span<const factorial_arg>(args.begin(), args.size()),
                                     base, delta);
}

// (a;q)_{n-k}/(b;q)_{n-k} = (b/a)^k (a;q)_n (q^{1-n}/b;q)_k / [(b;q)_n (q^{1-n}/a;q)_k]
inline residual residual_epdi(cplx a, cplx b, int n, int k, const refined_base& base,
                              double delta = default_zero_delta) {
    if (n < 0 || k < 0 || k > n) throw constraint_violated("epdi needs 0 <= k <= n");
    const int y = base.refinement();
    const cplx q1n = base.power(static_cast<std::int64_t>(y) * (1 - n));
    auto num = [&](cplx x, int len) { return detail::factorial_scaled({x, y, len}, base, delta); };
    auto den = [&](cplx x, int len) { return detail::factorial_denom_scaled({x, y, len}, base, delta); };

    scaled lhs = num(a, n - k) / den(b, n - k);
    scaled rhs = scaled::from(ipow(b / a, k)) * num(a, n) * num(q1n / b, k) /
                 (den(b, n) * den(q1n / a, k));
    residual_sum acc;
    acc.add(lhs);
    acc.add(-rhs);
    return acc.result();
}

// (a;q)_n/(b;q)_n = (a/b)^n (q^{1-n}/a;q)_n / (q^{1-n}/b;q)_n
inline residual residual_epi(cplx a, cplx b, int n, const refined_base& base,
                             double delta = default_zero_delta) {
    if (n < 0) throw constraint_violated("epi needs n >= 0");
    const int y = base.refinement();
    const cplx q1n = base.power(static_cast<std::int64_t>(y) * (1 - n));
    auto num = [&](cplx x, int len) { return detail::factorial_scaled({x, y, len}, base, delta); };
    auto den = [&](cplx x, int len) { return detail::factorial_denom_scaled({x, y, len}, base, delta); };

    scaled lhs = num(a, n) / den(b, n);
    scaled rhs = scaled::from(ipow(a / b, n)) * num(q1n / a, n) / den(q1n / b, n);
    residual_sum acc;
    acc.add(lhs);
    acc.add(-rhs);
    return acc.result();
}

// (x;q)_{sk} = (x, xq, ..., xq^{s-1}; q^s)_k
inline residual residual_xsk(cplx x, int s, int k, const refined_base& base,
                             double delta = default_zero_delta) {
    if (s < 1 || k < 0) throw constraint_violated("xsk needs s >= 1, k >= 0");
    const int y = base.refinement();
    scaled lhs = detail::factorial_scaled({x, y, s * k}, base, delta);
    scaled rhs = scaled::one();
    cplx xt = x;
    const cplx q = base.q();
    for (int t = 0; t < s; ++t) {
        rhs *= detail::factorial_scaled({xt, y * s, k}, base, delta);
        xt *= q;
    }
    residual_sum acc;
    acc.add(lhs);
    acc.add(-rhs);
    return acc.result();
}

} // namespace ellipsum

#endif
