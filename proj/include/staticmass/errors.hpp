#pragma once

#include <stdexcept>
#include <string>

namespace staticmass {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (bad radius, bad height, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method (root finding, quadrature, ODE) gave up.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An integral that should be finite is not (e.g. a height function with
/// a non-integrable slope singularity).
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Query at a non-regular value, typically the minimal inner boundary.
class SingularValueError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Parameters that are well-formed but outside the admissible family.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace staticmass
