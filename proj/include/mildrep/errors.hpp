#pragma once

#include <stdexcept>
#include <string>

namespace mildrep {

/// Input violates a documented precondition (bad exponents, empty grid, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A root or maximum is not bracketed by the supplied interval.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative optimizer failed on every attempt.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed result violates an ordering that holds mathematically;
/// indicates a numerical bug rather than bad input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace mildrep
