#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nkappa {

/// Evaluation requested at a pole (or on a branch cut) of the function.
class pole_error : public std::runtime_error {
public:
    pole_error(std::complex<double> where, const std::string& what_arg)
        : std::runtime_error(what_arg), location(where) {}
    std::complex<double> location;
};

/// Input violates a precondition (wrong representation, asymmetric data, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Resolvent requested at (or numerically too close to) a spectral point.
class resolvent_error : public std::runtime_error {
public:
    resolvent_error(std::complex<double> z, const std::string& what_arg)
        : std::runtime_error(what_arg), location(z) {}
    std::complex<double> location;
};

/// A stabilization loop ran out of budget without reaching a stable answer.
class nonstabilized_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The computation reached a mathematically inconsistent state
/// (e.g. a factorization that cannot reach kappa = 0).
class inconsistency_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nkappa
