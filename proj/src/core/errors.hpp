#pragma once

#include <stdexcept>

namespace vplate {

/// Time step too coarse for the largest modal frequency (lambda*dt > 2).
struct StabilityError : std::runtime_error {
  double lambda_dt;
  explicit StabilityError(const std::string& msg, double ldt)
      : std::runtime_error(msg), lambda_dt(ldt) {}
};

/// Gram matrix numerically singular or indefinite; carries the offending
/// minimum eigenvalue.  Failure is signal: no regularization is applied.
struct GramDegenerateError : std::runtime_error {
  double min_eig;
  explicit GramDegenerateError(const std::string& msg, double me)
      : std::runtime_error(msg), min_eig(me) {}
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vplate
