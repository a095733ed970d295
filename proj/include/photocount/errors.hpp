#pragma once
#include <stdexcept>
#include <string>

namespace photocount {

/// Argument outside the mathematical domain of an operation (t < 0, E above
/// the barrier, non-positive frequency, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// API misuse: wrong model variant, missing seed, unsorted samples,
/// mismatched horizons.
class UsageError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Raised when the mean first-passage time is requested for a zero-drift law,
/// whose mean diverges. Distinct type so callers must handle the case.
class InfiniteMeanError : public DomainError {
public:
  InfiniteMeanError()
      : DomainError("mean first-passage time diverges for zero drift") {}
};

/// Numerical-precondition failure: grid resolution, Peclet bound, truncation
/// depth. The CLI maps this to exit code 3.
class PreconditionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace photocount
