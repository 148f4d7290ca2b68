#pragma once

#include <stdexcept>
#include <string>

namespace gpelab {

// Exit-code mapping in the command line tool:
//   ConfigError, DomainError      -> 1
//   NonconvergenceError           -> 2
//   NumericError (and subclasses) -> 3

// Invalid or inconsistent configuration input (files, keys, values).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Arguments outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical procedure produced an unusable result (failed factorization,
// overflow, eigensolver breakdown).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver ran out of iterations; carries the last residual so
// callers can report how close it got.
struct NonconvergenceError : std::runtime_error {
  double last_residual;
  NonconvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
};

// Time stepping became unstable or the field left the representable range.
struct IntegratorError : NumericError {
  using NumericError::NumericError;
};

}  // namespace gpelab
