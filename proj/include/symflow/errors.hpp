#pragma once

#include <stdexcept>
#include <string>

namespace symflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the physical domain (h <= 0, non-finite input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or sampling box.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Invalid constructor parameter (c2 <= 0, all-zero pair, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A coefficient or field evaluated to a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// The hodograph map has a (numerically) singular Jacobian.
class DegenerateMapError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration did not converge; carries the last iterate.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double u, double h)
      : Error(what), last_u(u), last_h(h) {}
  double last_u;
  double last_h;
};

/// Reduced case-(i) system hit the characteristic degeneracy.
class SonicPointError : public Error {
 public:
  SonicPointError(const std::string& what, double p)
      : Error(what), p(p) {}
  double p;
};

/// Field construction produced nothing usable.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A finite-volume step produced a non-positive column height.
class PositivityError : public Error {
 public:
  PositivityError(const std::string& what, int cell)
      : Error(what), cell(cell) {}
  int cell;
};

/// f fails the compatibility equation needed to reconstruct g.
class CompatibilityError : public Error {
 public:
  CompatibilityError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

/// Bessel order would be imaginary.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

}  // namespace symflow
