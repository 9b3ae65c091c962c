#pragma once

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "hit/core/error.hpp"
#include "hit/prediction/geometry.hpp"

namespace hit::sim {

struct KalmanParams {
  double accel_std = 2.0;     ///< white-acceleration process noise (m/s^2)
  double meas_std = 0.01;     ///< per-axis measurement noise (m)
  double init_vel_std = 0.5;  ///< prior velocity spread at initialization (m/s)
};

/// Constant-velocity wrist filter state: (px, py, vx, vy).
struct KalmanState {
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  Eigen::Matrix4d P = Eigen::Matrix4d::Identity();
  KalmanParams params{};
  bool initialized = false;

  Vec2 position() const { return x.head<2>(); }
  Vec2 velocity() const { return x.tail<2>(); }
};

namespace detail {

inline bool covariance_is_psd(const Eigen::Matrix4d& P) {
  if (!P.allFinite()) return false;
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + P.cwiseAbs().maxCoeff())) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(P, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-12 * (1.0 + P.cwiseAbs().maxCoeff());
}

}  // namespace detail

/// Constant-velocity predict, then a Joseph-form update when a measurement
/// is present. Returns the new state and the smoothed position.
inline std::pair<KalmanState, Vec2> kalman_smooth(KalmanState ks, const std::optional<Vec2>& z, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("kalman_smooth needs dt > 0");
  const double r2 = ks.params.meas_std * ks.params.meas_std;

  if (!ks.initialized) {
    if (!z) throw InvalidParameter("kalman filter cannot start from a missing measurement");
    ks.x << z->x(), z->y(), 0.0, 0.0;
    const double v2 = ks.params.init_vel_std * ks.params.init_vel_std;
    ks.P = Eigen::Vector4d(r2, r2, v2, v2).asDiagonal();
    ks.initialized = true;
    return {ks, ks.position()};
  }

  Eigen::Matrix4d F = Eigen::Matrix4d::Identity();
  F(0, 2) = dt;
  F(1, 3) = dt;
  const double q = ks.params.accel_std * ks.params.accel_std;
  const double a = dt * dt * dt * dt / 4.0, b = dt * dt * dt / 2.0, c = dt * dt;
  Eigen::Matrix4d Q = Eigen::Matrix4d::Zero();
  Q(0, 0) = Q(1, 1) = a * q;
  Q(0, 2) = Q(2, 0) = Q(1, 3) = Q(3, 1) = b * q;
  Q(2, 2) = Q(3, 3) = c * q;

  ks.x = F * ks.x;
  ks.P = F * ks.P * F.transpose() + Q;

  if (z) {
    Eigen::Matrix<double, 2, 4> H = Eigen::Matrix<double, 2, 4>::Zero();
    H(0, 0) = H(1, 1) = 1.0;
    const Eigen::Matrix2d R = Eigen::Matrix2d::Identity() * r2;
    const Eigen::Matrix2d S = H * ks.P * H.transpose() + R;
    const Eigen::Matrix<double, 4, 2> K = ks.P * H.transpose() * S.inverse();
    ks.x += K * (*z - H * ks.x);
    const Eigen::Matrix4d I_KH = Eigen::Matrix4d::Identity() - K * H;
    ks.P = I_KH * ks.P * I_KH.transpose() + K * R * K.transpose();
  }
  ks.P = 0.5 * (ks.P + ks.P.transpose());
  if (!detail::covariance_is_psd(ks.P)) throw NumericError("kalman covariance lost positive semi-definiteness");
  return {ks, ks.position()};
}

}  // namespace hit::sim
