#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "hit/core/error.hpp"

namespace hit {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

namespace prediction {

enum class RegionKind { StaticTaskGoal, PreparationArea, FollowRobot };

/// Gaussian region an intention points at. Follow-robot regions are rebuilt
/// around the end-effector every time they are queried.
struct GoalRegion {
  Vec2 mean = Vec2::Zero();
  Mat2 cov = Mat2::Zero();
  RegionKind kind = RegionKind::StaticTaskGoal;
};

inline bool is_psd(const Mat2& m, double tol = 1e-15) {
  if (std::abs(m(0, 1) - m(1, 0)) > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff())) return false;
  // 2x2 symmetric: PSD iff both diagonal entries and the determinant are >= 0.
  return m(0, 0) >= -tol && m(1, 1) >= -tol && m.determinant() >= -tol;
}

inline GoalRegion fr_goal_region(const Vec2& robot_ee, const Mat2& radius_cov) {
  if (!is_psd(radius_cov)) throw NumericError("FR region covariance must be symmetric PSD");
  return {robot_ee, radius_cov, RegionKind::FollowRobot};
}

/// Regularization added to a singular predictive covariance (m^2).
inline constexpr double kCovRegularization = 1e-9;

/// log N(x; mean, cov) in 2D. Singular covariances are lifted by lambda*I.
inline double log_gaussian_2d(const Vec2& x, const Vec2& mean, Mat2 cov) {
  double det = cov.determinant();
  if (!(det > 1e-30)) {
    cov += kCovRegularization * Mat2::Identity();
    det = cov.determinant();
  }
  const Vec2 d = x - mean;
  const double maha = d.dot(cov.inverse() * d);
  return -std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det) - 0.5 * maha;
}

}  // namespace prediction
}  // namespace hit
