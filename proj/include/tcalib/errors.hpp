#pragma once

#include <stdexcept>
#include <string>

namespace tcalib {

/// Malformed or out-of-domain input (empty sample, negative count, ragged CSV...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive solver was asked to search a space larger than its budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative numerics failed to converge or an internal invariant broke.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tcalib
