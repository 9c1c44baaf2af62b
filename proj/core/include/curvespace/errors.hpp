#pragma once

#include <stdexcept>
#include <string>

namespace curvespace {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

// Bad arguments, size mismatches, violated preconditions.
class InputError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "InputError"; }
};

// Curve or slice is not immersed, self-intersects, or is otherwise unusable.
class GeometryError : public InputError {
public:
  using InputError::InputError;
  const char* kind() const noexcept override { return "GeometryError"; }
};

class NumericalError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "NumericalError"; }
};

class CflError : public NumericalError {
public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "CflError"; }
};

class BlowUpError : public NumericalError {
public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "BlowUpError"; }
};

// Vanishing slice energy, empty zero set, or similar loss of signal.
class StallError : public NumericalError {
public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "StallError"; }
};

class SingularError : public NumericalError {
public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "SingularError"; }
};

class ConvergenceError : public NumericalError {
public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "ConvergenceError"; }
};

}  // namespace curvespace
