#pragma once

#include <stdexcept>
#include <string>

namespace mbkit {

/// Base for every numerical failure raised by the library.
class mbkit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument sits on (or within 1e-12 of) a pole of Gamma.
class pole_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

/// Preconditions of an operation are violated.
class domain_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

/// An iterative scheme did not reach its tolerance.
class convergence_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

/// The integrand-evaluation budget of a quadrature was exhausted.
class budget_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

/// A conditionally convergent integrand was handed to a truncation bound.
class unbounded_tail_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

/// Geometric consistency failures in the pull-back module.
class submersion_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

class chart_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

class infeasible_domain_error : public mbkit_error {
public:
    using mbkit_error::mbkit_error;
};

}  // namespace mbkit
