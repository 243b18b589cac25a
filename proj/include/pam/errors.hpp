#pragma once

#include <stdexcept>
#include <string>

namespace pam {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Problem size outside the supported range (enumeration caps, n limits).
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A value-type invariant was violated; the message names the clause.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller broke an operation precondition (e.g. an illegal path move).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Numerical procedure failed to reach its target (non-convergence, etc.).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pam
