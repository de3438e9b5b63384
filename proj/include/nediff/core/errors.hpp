#ifndef NEDIFF_CORE_ERRORS_HPP
#define NEDIFF_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nediff {

// Invalid user or scenario configuration (grid too small, schema violation, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Object used before it reached a required state (e.g. uncalibrated model).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Numerical failure: non-convergent quadrature, NaN during evolution.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string &what, double estimate = 0.0)
      : std::runtime_error(what), estimate_(estimate) {}

  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

}  // namespace nediff

#endif  // NEDIFF_CORE_ERRORS_HPP
