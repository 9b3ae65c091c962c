#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "hit/core/error.hpp"
#include "hit/prediction/geometry.hpp"

namespace hit::sim {

enum class Mode { CE, CO };

inline const char* to_string(Mode m) { return m == Mode::CE ? "CE" : "CO"; }

/// Potential-field parameters. r_min/r_max bound the 1/r^2 human term.
struct ApfParams {
  double goal_speed = 0.08;  ///< c, constant attraction speed (m/s)
  double human_gain = 0.0018;
  double r_min = 0.05;
  double r_max = 0.5;

  void validate() const {
    if (!(goal_speed >= 0.0 && human_gain >= 0.0)) throw InvalidParameter("apf gains must be >= 0");
    if (!(r_min > 0.0 && r_max > r_min)) throw InvalidParameter("apf needs 0 < r_min < r_max");
  }
};

enum class ApfMode { Coexistence, CooperationApproach };

inline Vec2 clip_norm(const Vec2& v, double limit) {
  const double n = v.norm();
  return n > limit ? Vec2(v * (limit / n)) : v;
}

/// Human term alone: magnitude k/max(r, r_min)^2 inside r_max, zero beyond.
/// Repulsive in coexistence, attractive while approaching for cooperation.
inline Vec2 apf_human_term(const Vec2& ee, const Vec2& goal_point, const Vec2& wrist, ApfMode mode,
                           const ApfParams& p) {
  const Vec2 d = ee - wrist;
  const double r = d.norm();
  if (r > p.r_max) return Vec2::Zero();
  Vec2 away;
  if (r > 1e-9) {
    away = d / r;
  } else {
    const Vec2 g = ee - goal_point;
    away = g.norm() > 1e-9 ? Vec2(g.normalized()) : Vec2(0.0, 1.0);
  }
  const double mag = p.human_gain / std::pow(std::max(r, p.r_min), 2);
  return (mode == ApfMode::Coexistence ? 1.0 : -1.0) * mag * away;
}

/// v = v_goal + v_human clipped to `speed_limit`. With dt > 0 the goal term
/// is capped at dist/dt so the commanded step never overshoots the goal.
inline Vec2 apf_velocity(const Vec2& ee, const Vec2& goal_point, const Vec2& wrist, ApfMode mode, const ApfParams& p,
                         double speed_limit, double dt = 0.0) {
  const Vec2 to_goal = goal_point - ee;
  const double dist = to_goal.norm();
  Vec2 v_goal = Vec2::Zero();
  if (dist > 1e-12) {
    double s = p.goal_speed;
    if (dt > 0.0) s = std::min(s, dist / dt);
    v_goal = to_goal * (s / dist);
  }
  return clip_norm(v_goal + apf_human_term(ee, goal_point, wrist, mode, p), speed_limit);
}

/// Running-mean smoother: k*v_current + (1-k)*v_goal.
inline Vec2 smooth_velocity(const Vec2& v_current, const Vec2& v_goal, double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw InvalidParameter("smoothing factor must lie in [0, 1]");
  return k * v_current + (1.0 - k) * v_goal;
}

struct AdmittanceParams {
  double damping = 10.0;
  double pull_threshold = 0.3;  ///< f_min, below which the pull counts as released
  double release_time = 1.0;    ///< seconds of low pull that end guidance
  double speed_limit = 0.3;
  double contact_radius = 0.04;
};

struct AdmittanceState {
  double low_pull_time = 0.0;
};

struct AdmittanceOutput {
  Vec2 velocity = Vec2::Zero();
  bool guidance_ended = false;
};

/// Pure damping admittance. Guidance ends after `release_time` of pull below
/// threshold.
inline AdmittanceOutput admittance_step(AdmittanceState& s, Mode mode, const Vec2& pull, double dt,
                                        const AdmittanceParams& p) {
  if (mode != Mode::CO) throw InvalidParameter("admittance control runs only in cooperation mode");
  if (!(dt > 0.0)) throw InvalidParameter("admittance_step needs dt > 0");
  AdmittanceOutput out;
  out.velocity = clip_norm(pull / p.damping, p.speed_limit);
  if (pull.norm() < p.pull_threshold) {
    s.low_pull_time += dt;
  } else {
    s.low_pull_time = 0.0;
  }
  out.guidance_ended = s.low_pull_time >= p.release_time - 1e-9;
  return out;
}

struct PushParams {
  double noise = 0.02;     ///< delta, half-width of the uniform goal offset (m)
  double tol = 0.0195;     ///< offsets within this radius seat the part
  double arrive_tol = 0.005;
  double duration = 1.0;   ///< seconds the robot dwells for the push
};

enum class PushOutcome { Ok, Failed };

template <class Rng>
Vec2 sample_push_offset(double delta, Rng& rng) {
  if (!(delta >= 0.0)) throw InvalidParameter("push noise must be >= 0");
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double x = u(rng), y = u(rng);
  return {delta * x, delta * y};
}

inline PushOutcome push_outcome(const Vec2& offset, double tol) {
  return offset.norm() <= tol ? PushOutcome::Ok : PushOutcome::Failed;
}

}  // namespace hit::sim
