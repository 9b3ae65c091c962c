#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "hit/core/error.hpp"

namespace hit::core {

/// Log of the product of per-step densities over a Tp-step window.
/// `step_log_density(tau)` returns log P(x_{t+tau} | history, g), tau = 1..tp.
template <typename StepLogDensity>
double trajectory_log_likelihood(std::size_t available_steps, int tp, StepLogDensity&& step_log_density) {
  if (tp < 1) throw InvalidParameter("prediction horizon must be >= 1");
  if (static_cast<std::size_t>(tp) > available_steps)
    throw InvalidParameter("prediction horizon " + std::to_string(tp) + " exceeds the " +
                           std::to_string(available_steps) + " available observations");
  double acc = 0.0;
  for (int tau = 1; tau <= tp; ++tau) {
    double ld = step_log_density(tau);
    if (std::isnan(ld) || ld == std::numeric_limits<double>::infinity())
      throw NumericError("per-step log density must be finite or -inf");
    acc += ld;
  }
  return acc;
}

/// Linear-space form: `step_density(tau)` returns a density >= 0.
template <typename StepDensity>
double trajectory_likelihood(std::size_t available_steps, int tp, StepDensity&& step_density) {
  return std::exp(trajectory_log_likelihood(available_steps, tp, [&](int tau) {
    double d = step_density(tau);
    if (!std::isfinite(d) || d < 0.0) throw NumericError("per-step density must be finite and >= 0");
    return d > 0.0 ? std::log(d) : -std::numeric_limits<double>::infinity();
  }));
}

}  // namespace hit::core
