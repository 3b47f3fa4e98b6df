#pragma once

#include <stdexcept>
#include <string>

namespace dircomp {

/// Argument outside the mathematical domain of an operation (s <= 1, invalid symbol, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A summation could not reach the requested tolerance within PrecisionBudget::max_terms.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// Operation requires a compact symbol (Re c1 > 1/2 + |c2|).
class NonCompactError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Matrix would exceed the configured entry cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dircomp
