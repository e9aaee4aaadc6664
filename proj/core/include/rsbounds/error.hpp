#pragma once

#include <stdexcept>
#include <string>

namespace rsbounds {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A shape parameter or distribution parameter outside its valid domain.
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for this kind (e.g. a polynomial basis for a
// discrete law, or shifting a Gamma law).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Two distributions with no common closed-form parameterization.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

// A caller-side precondition was violated (under-resolved grid, bad input).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Solver breakdown, non-finite values, failed eigen-solve.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The physical model left its valid regime (e.g. nonpositive conductivity).
class PhysicalValidityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace rsbounds
