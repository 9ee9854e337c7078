#pragma once

#include <stdexcept>
#include <string>

namespace conclique {

// Thrown when a numeric routine cannot deliver a meaningful result
// (non-positive-definite precision matrix, divergent recursion, ...).
// Configuration mistakes throw std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conclique
