#pragma once

#include <stdexcept>
#include <string>

namespace rfspec {

/// Invalid argument or parameter combination (pole of Γ, α out of range,
/// skewness constraint, dimension mismatch, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to converge or produced non-finite values.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or truncated serialized data.
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operation requested on an object in the wrong state (e.g. rescaling an
/// already scaled operator matrix).
class StateError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// A configured work or wall-time budget would be exceeded.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace rfspec
