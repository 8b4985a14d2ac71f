#pragma once

#include <stdexcept>
#include <string>

namespace sintermech {

/// Base of every exception thrown by the library.  `kind()` is a short
/// machine-readable tag used by the CLI error line.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept = 0;
};

/// Bad user input: unknown keys, malformed values, violated parameter ranges.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config"; }
};

/// Any failure of the numerics (domain violations, breakdowns, non-convergence).
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

class DomainError : public NumericalError {
 public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "domain"; }
};

class InvalidDeformation : public NumericalError {
 public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "invalid-deformation"; }
};

class GeometryBreakdown : public NumericalError {
 public:
  GeometryBreakdown(const std::string& what, double rho_hat)
      : NumericalError(what), rho_hat_(rho_hat) {}
  const char* kind() const noexcept override { return "geometry-breakdown"; }
  double rho_hat() const noexcept { return rho_hat_; }

 private:
  double rho_hat_;
};

class DegenerateSurface : public NumericalError {
 public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "degenerate-surface"; }
};

class DegenerateDirection : public NumericalError {
 public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "degenerate-direction"; }
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
  const char* kind() const noexcept override { return "non-convergence"; }
};

}  // namespace sintermech
