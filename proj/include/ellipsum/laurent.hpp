// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_LAURENT_HPP
#define ELLIPSUM_LAURENT_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "ellipsum/errors.hpp"
#include "ellipsum/theta.hpp"

namespace ellipsum {

// Finite window of a formal Laurent series.  Coefficients are stored for
// exponents lo..hi; `margin` counts how many indices at either end of the
// window have become unreliable through operator application.  Builders must
// choose `lo` at or below the lowest nonzero exponent of the series they
// truncate, so that out-of-window reads below the window are exact zeros.
class laurent_window {
  public:
    laurent_window(int lo, std::vector<cplx> coeffs, int margin = 0)
        : lo_(lo), coeffs_(std::move(coeffs)), margin_(margin) {
        if (coeffs_.empty()) throw insufficient_window("empty Laurent window");
        if (margin_ < 0) throw insufficient_window("negative margin");
    }

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(coeffs_.size()) - 1; }
    int margin() const { return margin_; }
    int trusted_lo() const { return lo_ + margin_; }
    int trusted_hi() const { return hi() - margin_; }
    bool trusted(int m) const { return m >= trusted_lo() && m <= trusted_hi(); }

    // stored coefficient, or 0 outside the window (exact below lo by the
    // builder contract; unknown above hi -- consult trusted())
    cplx at(int m) const {
        if (m < lo_ || m > hi()) return {0.0, 0.0};
        return coeffs_[static_cast<std::size_t>(m - lo_)];
    }
    cplx& ref(int m) {
        if (m < lo_ || m > hi())
            throw insufficient_window("coefficient index " + std::to_string(m) +
                                      " outside stored window");
        return coeffs_[static_cast<std::size_t>(m - lo_)];
    }

  private:
    int lo_;
    std::vector<cplx> coeffs_;
    int margin_;
};

// Multiplication by z: exponents shift by +1 and one more boundary index
// becomes untrusted.
inline laurent_window apply_shift(const laurent_window& w) {
    std::vector<cplx> c(static_cast<std::size_t>(w.hi() - w.lo() + 1));
    for (int m = w.lo(); m <= w.hi(); ++m) c[static_cast<std::size_t>(m - w.lo())] = w.at(m);
    return laurent_window(w.lo() + 1, std::move(c), w.margin() + 1);
}

// <a, b> = [z^0](a(z) b(z)) = sum_m a_m b_{-m}.  The sum is finite because
// both series vanish below their windows; it must be covered by trusted
// coefficients on both sides.
inline cplx pairing(const laurent_window& a, const laurent_window& b) {
    const int m_lo = a.lo();
    const int m_hi = -b.lo();
    cplx acc{0.0, 0.0};
    for (int m = m_lo; m <= m_hi; ++m) {
        const bool a_ok = a.trusted(m);
        const bool b_ok = b.trusted(-m);
        // a trusted zero annihilates the term whatever the other side holds
        if (a_ok && a.at(m) == cplx{0.0, 0.0}) continue;
        if (b_ok && b.at(-m) == cplx{0.0, 0.0}) continue;
        if (!a_ok || !b_ok)
            throw insufficient_window("pairing touches untrusted coefficients at z^" +
                                      std::to_string(m));
        acc += a.at(m) * b.at(-m);
    }
    return acc;
}

} // namespace ellipsum

#endif
