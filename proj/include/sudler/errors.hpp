#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sudler {

/// Malformed continued-fraction text; `position` is the 0-based offset of the offending character.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A precondition on the arguments of an operation does not hold.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested computation exceeds the configured size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An identity that must hold exactly (or to the precision budget) was violated.
class IdentityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sudler
