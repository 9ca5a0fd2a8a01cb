#pragma once

#include <stdexcept>
#include <string>

namespace smile {

/// A caller broke a documented precondition (bad argument range, length mismatch, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A belief that does not address a normalizable member of its conjugate family.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An estimator was paired with a likelihood family it cannot handle.
class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numeric procedure failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace smile
