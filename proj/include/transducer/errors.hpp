#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace transducer {

/// Contract violation on user-supplied input (bad label, negative rate, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A physical invariant failed during integration (trace drift, loss of
/// positivity, non-Hermitian Hamiltonian).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Output files could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace transducer
