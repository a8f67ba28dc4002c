#pragma once

#include <stdexcept>
#include <string>

namespace fiberprop {

/// Violated precondition on a public operation (bad size, negative width, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Field and plan/reference were built on incompatible grids.
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A nonlinear scheme step was requested with a step size beyond the
/// stability bound. Substepping is the caller's job, so this is a caller bug.
class CflViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace fiberprop
