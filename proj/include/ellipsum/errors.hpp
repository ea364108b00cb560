// Copyright the ellipsum authors 2026.
// Distributed under the Boost Software License, Version 1.0.
// (See accompanying file LICENSE_1_0.txt or copy at
// https://www.boost.org/LICENSE_1_0.txt)

#ifndef ELLIPSUM_ERRORS_HPP
#define ELLIPSUM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ellipsum {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// theta evaluation
struct zero_argument : error {
    zero_argument() : error("theta argument must be nonzero") {}
};
struct nome_out_of_range : error {
    explicit nome_out_of_range(const std::string& what) : error(what) {}
};
struct truncation_failure : error {
    explicit truncation_failure(const std::string& what) : error(what) {}
};

// denominators that land within delta of the theta zero set {p^k}
struct division_by_zero_theta : error {
    explicit division_by_zero_theta(const std::string& what) : error(what) {}
};

// structural preconditions of identities and instances
struct constraint_violated : error {
    explicit constraint_violated(const std::string& what) : error(what) {}
};
struct bad_arity : error {
    explicit bad_arity(const std::string& what) : error(what) {}
};

// Laurent window machinery
struct insufficient_window : error {
    explicit insufficient_window(const std::string& what) : error(what) {}
};
struct index_out_of_sequence_window : error {
    explicit index_out_of_sequence_window(const std::string& what) : error(what) {}
};
struct degenerate_spectrum : error {
    explicit degenerate_spectrum(const std::string& what) : error(what) {}
};

// balance-constraint solving
struct degenerate_constraint : error {
    explicit degenerate_constraint(const std::string& what) : error(what) {}
};

// harness
struct unsampleable : error {
    explicit unsampleable(const std::string& what) : error(what) {}
};
struct bad_shape : error {
    explicit bad_shape(const std::string& what) : error(what) {}
};
struct config_error : error {
    explicit config_error(const std::string& what) : error(what) {}
};

} // namespace ellipsum

#endif
