#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kstab {

// Root of the library's error hierarchy. Everything thrown on invalid input or
// exhausted budgets derives from this, so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- input / parse failures ------------------------------------------------

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class NotHomogeneousError : public Error {
 public:
  using Error::Error;
};

class VanishingCoefficientError : public Error {
 public:
  using Error::Error;
};

// Every variable must be absent from at least one monomial; otherwise the
// hypersurface contains a coordinate hyperplane as a component.
class DivisibleByVariableError : public Error {
 public:
  DivisibleByVariableError(const std::string& what, std::size_t variable)
      : Error(what), variable_(variable) {}

  std::size_t variable() const { return variable_; }

 private:
  std::size_t variable_;
};

// --- shape / compatibility failures ---------------------------------------

class DimensionError : public Error {
 public:
  using Error::Error;
};

class WeightSumError : public Error {
 public:
  using Error::Error;
};

// --- computation failures --------------------------------------------------

class EmptyFamilyError : public Error {
 public:
  using Error::Error;
};

// Lower envelope ends with a positive slope, so its tail penalty integral
// diverges.
class DivergentPenaltyError : public Error {
 public:
  using Error::Error;
};

// Raised when a computation requires a group-invariant input and the given
// one is not.
class NotInvariantError : public Error {
 public:
  using Error::Error;
};

class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& what, const std::string& count)
      : Error(what), count_(count) {}

  // Decimal rendering of the work estimate that tripped the budget.
  const std::string& count() const { return count_; }

 private:
  std::string count_;
};

}  // namespace kstab
