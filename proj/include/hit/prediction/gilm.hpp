#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/trajectory.hpp"
#include "hit/prediction/geometry.hpp"

namespace hit::prediction {

/// Gaussian intention-aware linear model parameters.
struct GilmParams {
  /// Recent samples used for the average-speed estimate (>= 2).
  int speed_window = 15;
  /// Per-step Gaussian process noise (m^2).
  Mat2 process_noise_cov = Mat2::Identity() * (0.008 * 0.008);
  /// Add the goal-region covariance, propagated through the step gain.
  bool goal_backprop = true;

  void validate() const {
    if (speed_window < 2) throw InvalidParameter("speed_window must be >= 2");
    if (!is_psd(process_noise_cov)) throw InvalidParameter("process_noise_cov must be symmetric PSD");
  }
};

/// Wrist and end-effector history with strictly increasing timestamps.
class ObservationWindow {
 public:
  struct Sample {
    double t;
    Vec2 wrist;
    Vec2 robot_ee;
  };

  explicit ObservationWindow(std::size_t capacity = 64) : capacity_(std::max<std::size_t>(capacity, 2)) {}

  void push(double t, const Vec2& wrist, const Vec2& robot_ee) {
    if (!samples_.empty() && !(t > samples_.back().t))
      throw InvalidParameter("observation timestamps must be strictly increasing");
    samples_.push_back({t, wrist, robot_ee});
    if (samples_.size() > capacity_) samples_.erase(samples_.begin());
  }

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_.at(i); }
  const Sample& back() const { return samples_.back(); }
  std::size_t capacity() const { return capacity_; }
  void clear() { samples_.clear(); }

 private:
  std::size_t capacity_;
  std::vector<Sample> samples_;
};

/// Average wrist speed (m/s) over the most recent `speed_window` samples.
inline double estimate_speed(const ObservationWindow& w, const GilmParams& params) {
  if (w.size() < 2) throw InvalidParameter("speed estimate needs at least 2 wrist samples");
  const std::size_t n = w.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(params.speed_window), n);
  const std::size_t first = n - k;
  double dist = 0.0;
  for (std::size_t i = first + 1; i < n; ++i) dist += (w[i].wrist - w[i - 1].wrist).norm();
  const double span = w[n - 1].t - w[first].t;
  return span > 0.0 ? dist / span : 0.0;
}

/// Below this distance to the goal mean the directed term vanishes (m).
inline constexpr double kGoalEpsilon = 1e-6;

/// x + (speed*dt / |g - x|) (g - x) + noise.
inline Vec2 gilm_step(const Vec2& x, const GoalRegion& goal, double speed, double dt, const Vec2& noise) {
  if (speed < 0.0) throw InvalidParameter("speed must be >= 0");
  const Vec2 to_goal = goal.mean - x;
  const double dist = to_goal.norm();
  Vec2 next = x + noise;
  if (dist >= kGoalEpsilon) next += (speed * dt / dist) * to_goal;
  return next;
}

struct GaussianStep {
  Vec2 mean;
  Mat2 cov;
};

/// Tp-step Gaussian rollout from x. Means follow the noise-free step; the
/// covariance accumulates process noise and, when enabled, the goal-region
/// covariance scaled by the squared step gain.
inline std::vector<GaussianStep> gilm_rollout(const Vec2& x, const GoalRegion& goal, double speed, double dt, int tp,
                                              const GilmParams& params) {
  if (tp < 1) throw InvalidParameter("rollout horizon must be >= 1");
  std::vector<GaussianStep> out;
  out.reserve(tp);
  Vec2 mean = x;
  Mat2 cov = Mat2::Zero();
  for (int tau = 1; tau <= tp; ++tau) {
    const double dist = (goal.mean - mean).norm();
    cov += params.process_noise_cov;
    if (params.goal_backprop) {
      // Goal spread seen through the unit step direction; the soft floor on
      // the distance keeps its std below the step length near the goal.
      const double gain = speed * dt / std::sqrt(dist * dist + goal.cov.trace());
      cov += gain * gain * goal.cov;
    }
    mean = gilm_step(mean, goal, speed, dt, Vec2::Zero());
    out.push_back({mean, cov});
  }
  return out;
}

/// log P(x_{t+1:t+tp} | x_{..t}, g) under the rollout anchored at the sample
/// preceding the last tp observations. The speed estimate uses the most
/// recent samples of the window.
inline double gilm_log_likelihood(const ObservationWindow& w, const GoalRegion& goal, int tp, const GilmParams& params) {
  if (tp < 1) throw InvalidParameter("prediction horizon must be >= 1");
  if (w.size() < static_cast<std::size_t>(tp) + 1)
    throw InvalidParameter("window holds " + std::to_string(w.size()) + " samples; need tp + 1 = " +
                           std::to_string(tp + 1));
  const std::size_t anchor = w.size() - static_cast<std::size_t>(tp) - 1;
  const double speed = estimate_speed(w, params);
  const double dt = (w.back().t - w[anchor].t) / static_cast<double>(tp);
  const auto roll = gilm_rollout(w[anchor].wrist, goal, speed, dt, tp, params);
  return core::trajectory_log_likelihood(w.size() - 1, tp, [&](int tau) {
    const auto& g = roll[static_cast<std::size_t>(tau - 1)];
    return log_gaussian_2d(w[anchor + static_cast<std::size_t>(tau)].wrist, g.mean, g.cov);
  });
}

inline double gilm_likelihood(const ObservationWindow& w, const GoalRegion& goal, int tp, const GilmParams& params) {
  return std::exp(gilm_log_likelihood(w, goal, tp, params));
}

}  // namespace hit::prediction
