// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace nfsg {

// Argument outside an operation's mathematical domain (r <= 0, beta < 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Conditional distribution requested on an empty support (e.g. inner side with r_kappa = 0).
class DegenerateSupport : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Quadrature or inversion ran out of budget. Carries what was reached.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

} // namespace nfsg
