#pragma once

#include <stdexcept>
#include <string>

namespace energyopt {

// Bad input: malformed problem, inconsistent series, invalid parameters.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The optimisation problem has no feasible point.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Node, iteration or time budget exhausted before a usable answer was found.
class SolverLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data does not determine the requested quantity (e.g. model parameters).
class UnidentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace energyopt
