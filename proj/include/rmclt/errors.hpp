#ifndef RMCLT_ERRORS_HPP_
#define RMCLT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rmclt {

// Base of every error thrown by the library. `exit_code()` is the status the
// CLI reports for it.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 2; }
};

// Caller supplied something outside the documented domain (bad shape, bad
// argument, non-finite entries, unparsable spec).
class InputError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public InputError {
 public:
  using InputError::InputError;
};

class ArgumentError : public InputError {
 public:
  using InputError::InputError;
};

// The model does not support the requested closed form.
class CapabilityError : public InputError {
 public:
  using InputError::InputError;
};

class ResourceError : public InputError {
 public:
  using InputError::InputError;
};

// Numerical failure: non-convergence, degenerate sample, degenerate variance.
class NumericError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class DegenerateError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A derivative evaluated to a non-finite value at a Monte Carlo sample.
class SampleDomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Parameters are valid but outside the regime where a formula holds
// (e.g. n < 4p^2 for the Toeplitz variance floor).
class OutOfRegimeError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

}  // namespace rmclt

#endif  // RMCLT_ERRORS_HPP_
