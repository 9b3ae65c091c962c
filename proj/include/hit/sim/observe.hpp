#pragma once

#include <optional>
#include <random>

#include "hit/core/error.hpp"
#include "hit/prediction/geometry.hpp"

namespace hit::sim {

struct ObserveParams {
  double noise_std = 0.01;  ///< per-axis detection noise (m)
  double p_drop = 0.02;     ///< probability a frame has no detection
};

/// Noisy wrist detection; nullopt on dropout.
template <class Rng>
std::optional<Vec2> observe(const Vec2& wrist, const ObserveParams& p, Rng& rng) {
  if (!(p.noise_std >= 0.0)) throw InvalidParameter("observation noise must be >= 0");
  if (!(p.p_drop >= 0.0 && p.p_drop <= 1.0)) throw InvalidParameter("dropout probability must lie in [0, 1]");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Both draws always happen so the stream stays aligned across settings.
  const bool drop = u(rng) < p.p_drop;
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec2 e(n(rng), n(rng));
  if (drop) return std::nullopt;
  return Vec2(wrist + p.noise_std * e);
}

}  // namespace hit::sim
