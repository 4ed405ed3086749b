#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ptl {

/// Raised when an argument breaks a documented precondition (dimension
/// mismatch, negative occupation, invalid site, non-finite input).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an analytic two-mode routine is called outside the parameter
/// regime it is valid in (e.g. |gamma| > J for the PT-symmetric state).
class RegimeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the integrator when a step produces a non-finite amplitude.
class IntegrationBlowUp : public std::runtime_error {
 public:
  IntegrationBlowUp(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  /// Time at the start of the step that failed.
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Raised by the log-linear rate fit.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run configuration could not be parsed or validated. Carries the 1-based
/// line of the offending entry when it can be located in the source text.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what,
                       std::optional<std::size_t> line = std::nullopt)
      : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what
                                : what),
        line_(line) {}

  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

}  // namespace ptl
