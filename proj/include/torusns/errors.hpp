#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace torusns {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live on different lattices or carry incompatible component counts.
class LatticeMismatch : public Error {
 public:
  using Error::Error;
};

/// A grid is too coarse to represent the requested cutoff without aliasing.
class AliasingError : public Error {
 public:
  using Error::Error;
};

/// An input violates an operation's precondition (non-zero mean, non-solenoidal data, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Relaxed ellipticity failed at a sampled point. Carries the offending sample
/// and a unit symmetric trace-free matrix on which the quadratic form is <= 0.
class EllipticityViolation : public Error {
 public:
  EllipticityViolation(std::string message, std::vector<double> x, double t,
                       std::vector<double> zeta, double form_value)
      : Error(std::move(message)),
        x_(std::move(x)),
        t_(t),
        zeta_(std::move(zeta)),
        form_value_(form_value) {}

  const std::vector<double>& x() const noexcept { return x_; }
  double t() const noexcept { return t_; }
  /// Row-major n x n witness matrix.
  const std::vector<double>& zeta() const noexcept { return zeta_; }
  double form_value() const noexcept { return form_value_; }

 private:
  std::vector<double> x_;
  double t_;
  std::vector<double> zeta_;
  double form_value_;
};

/// The Galerkin trajectory left the a-priori energy ball or produced NaN.
class BlowUpError : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration. `line` is 0 when the problem is not tied to a line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0, std::string field = {})
      : Error(line > 0 ? "line " + std::to_string(line) + (field.empty() ? "" : " (" + field + ")") +
                             ": " + message
                       : (field.empty() ? message : field + ": " + message)),
        line_(line),
        field_(std::move(field)) {}

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace torusns
