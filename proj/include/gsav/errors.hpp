#pragma once

#include <stdexcept>
#include <string>

namespace gsav {

/// A precondition or structural invariant was broken by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A nonlinear function was evaluated outside its domain (e.g. |u| >= 1 for
/// the logarithmic potential).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value or left its representable range.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A runtime invariant check (MBP, energy monotonicity, ...) failed.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace gsav
