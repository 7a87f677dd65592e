#ifndef EDPDCS_ERRORS_HPP
#define EDPDCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace edpdcs {

// Bad arguments or violated preconditions at an API boundary.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A ledger charge would exceed the total budget. Always a planner bug.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed at runtime.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace edpdcs

#endif  // EDPDCS_ERRORS_HPP
