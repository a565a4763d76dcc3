#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmnc {

// Operands with incompatible algebra shapes or truncations.
class ShapeError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Input that is mathematically invalid for the requested construction
// (non-normal element for a norming state, non-idempotent projection, ...).
class NumericalError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ProjectionError : public NumericalError {
public:
  ProjectionError(std::string invariant, double defect)
      : NumericalError("projection invariant '" + invariant + "' violated (defect " +
                       std::to_string(defect) + ")"),
        invariant_(std::move(invariant)), defect_(defect) {}
  const std::string &invariant() const noexcept { return invariant_; }
  double defect() const noexcept { return defect_; }

private:
  std::string invariant_;
  double defect_;
};

// Exact solver or oracle asked to run past its size budget.
class BudgetExceeded : public std::length_error {
public:
  using std::length_error::length_error;
};

} // namespace hmnc
