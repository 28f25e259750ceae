#pragma once

#include <stdexcept>
#include <string>

namespace ctrw {

/// Raised when an input lies outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed user input such as an unknown law token or flag value.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure fails to reach its accuracy target.
/// Carries the best estimate and its error so callers can report them.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, double estimate, double error_estimate)
      : std::runtime_error(what + " (estimate " + std::to_string(estimate) +
                           ", error estimate " + std::to_string(error_estimate) + ")"),
        estimate_(estimate),
        error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double estimate_;
  double error_estimate_;
};

}  // namespace ctrw
