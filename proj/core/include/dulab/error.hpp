#pragma once

#include <stdexcept>
#include <string>

namespace dulab {

// Invalid argument or out-of-range mathematical input. CLI exit code 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold (for example a
// prime table that is too short for the requested window).
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// An internal invariant was violated. CLI exit code 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dulab
