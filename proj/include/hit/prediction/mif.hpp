#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/filter.hpp"
#include "hit/core/intention.hpp"
#include "hit/prediction/gilm.hpp"

namespace hit::prediction {

/// Stride configuration of one intention filter.
struct FilterConfig {
  int tp = 5;              ///< prediction horizon, time steps per stride
  double dt = 1.0 / 30.0;  ///< seconds per step
  double alpha = 0.985;    ///< stay-probability per stride

  void validate() const {
    if (tp < 1) throw InvalidParameter("tp must be >= 1");
    if (!(dt > 0.0)) throw InvalidParameter("dt must be > 0");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in [0, 1]");
  }
};

struct Particle {
  std::size_t intention = 0;
  double weight = 0.0;
};

/// Weighted intention hypotheses plus the generator that mutates them.
class ParticleSet {
 public:
  ParticleSet(core::IntentionSpace space, std::size_t n, std::uint64_t seed)
      : space_(std::move(space)), particles_(n), rng_(seed) {
    if (n == 0) throw InvalidParameter("particle set needs at least one particle");
    reset_uniform();
  }

  /// Spread intentions round-robin with equal weights.
  void reset_uniform() {
    const auto n = particles_.size();
    for (std::size_t i = 0; i < n; ++i) particles_[i] = {i % space_.size(), 1.0 / static_cast<double>(n)};
  }

  const core::IntentionSpace& space() const { return space_; }
  std::size_t size() const { return particles_.size(); }
  std::span<const Particle> particles() const { return particles_; }
  std::span<Particle> particles() { return particles_; }
  std::mt19937_64& rng() { return rng_; }

  double effective_sample_size() const {
    double s2 = 0.0;
    for (const auto& p : particles_) s2 += p.weight * p.weight;
    return s2 > 0.0 ? 1.0 / s2 : 0.0;
  }

  friend bool operator==(const ParticleSet& a, const ParticleSet& b) {
    if (a.particles_.size() != b.particles_.size() || !(a.space_ == b.space_) || a.rng_ != b.rng_) return false;
    for (std::size_t i = 0; i < a.particles_.size(); ++i)
      if (a.particles_[i].intention != b.particles_[i].intention || a.particles_[i].weight != b.particles_[i].weight)
        return false;
    return true;
  }

 private:
  core::IntentionSpace space_;
  std::vector<Particle> particles_;
  std::mt19937_64 rng_;
};

/// Per-intention sum of particle weights.
inline core::Posterior mif_posterior(const ParticleSet& ps) {
  std::vector<double> mass(ps.space().size(), 0.0);
  for (const auto& p : ps.particles()) mass[p.intention] += p.weight;
  return core::Posterior::from_weights(ps.space(), mass);
}

/// Low-variance (systematic) resampling to equal weights.
inline void systematic_resample(ParticleSet& ps) {
  auto parts = ps.particles();
  const auto n = parts.size();
  std::vector<Particle> out(n);
  std::uniform_real_distribution<double> u0(0.0, 1.0 / static_cast<double>(n));
  const double start = u0(ps.rng());
  double cum = parts[0].weight;
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = start + static_cast<double>(k) / static_cast<double>(n);
    while (u > cum && i + 1 < n) cum += parts[++i].weight;
    out[k] = {parts[i].intention, 1.0 / static_cast<double>(n)};
  }
  std::copy(out.begin(), out.end(), parts.begin());
}

struct MifStep {
  ParticleSet particles;
  core::Posterior posterior;
  bool reset = false;      ///< evidence zeroed every particle; set was reset to uniform
  bool resampled = false;  ///< effective sample size dropped below the threshold
};

/// One stride of the mutable intention filter given per-intention
/// likelihoods of the new observations (any common scale).
///   1. mutate each particle through transition_matrix(m, alpha)
///   2. weight by the likelihood of its intention
///   3. normalize
///   4. systematic resampling when ESS < ess_fraction * N
inline MifStep mif_step(ParticleSet ps, std::span<const double> likelihoods, double alpha, double ess_fraction = 0.5) {
  const auto m = ps.space().size();
  if (likelihoods.size() != m)
    throw DimensionMismatch("expected " + std::to_string(m) + " likelihoods, got " + std::to_string(likelihoods.size()));
  const core::TransitionModel T(static_cast<int>(m), alpha);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> other(0, m - 2);
  for (auto& p : ps.particles()) {
    if (unit(ps.rng()) >= T.stay()) {
      std::size_t j = other(ps.rng());
      p.intention = j >= p.intention ? j + 1 : j;
    }
  }

  double total = 0.0;
  for (auto& p : ps.particles()) {
    const double l = likelihoods[p.intention];
    if (!std::isfinite(l) || l < 0.0) throw NumericError("likelihoods must be finite and >= 0");
    p.weight *= l;
    total += p.weight;
  }

  bool reset = false;
  bool resampled = false;
  if (!(total > 0.0)) {
    ps.reset_uniform();
    reset = true;
  } else {
    for (auto& p : ps.particles()) p.weight /= total;
    if (ps.effective_sample_size() < ess_fraction * static_cast<double>(ps.size())) {
      systematic_resample(ps);
      resampled = true;
    }
  }
  auto post = mif_posterior(ps);
  return {std::move(ps), std::move(post), reset, resampled};
}

/// Per-goal GILM log-likelihoods of the last tp observations.
inline std::vector<double> goal_log_likelihoods(const ObservationWindow& w, std::span<const GoalRegion> goals, int tp,
                                                const GilmParams& params) {
  std::vector<double> ll(goals.size());
  for (std::size_t i = 0; i < goals.size(); ++i) ll[i] = gilm_log_likelihood(w, goals[i], tp, params);
  return ll;
}

/// Shifts log-likelihoods so the largest is 0 and exponentiates. Filtering
/// is invariant to the common factor; this keeps the evidence representable.
inline std::vector<double> scaled_likelihoods(std::span<const double> log_lik) {
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : log_lik) peak = std::max(peak, v);
  std::vector<double> out(log_lik.size(), 0.0);
  if (peak == -std::numeric_limits<double>::infinity()) return out;
  for (std::size_t i = 0; i < log_lik.size(); ++i) out[i] = std::exp(log_lik[i] - peak);
  return out;
}

/// Full stride on a window: GILM likelihood under each goal, then mif_step.
inline MifStep mif_step(ParticleSet ps, const ObservationWindow& w, std::span<const GoalRegion> goals,
                        const FilterConfig& cfg, const GilmParams& params, double ess_fraction = 0.5) {
  if (goals.size() != ps.space().size())
    throw DimensionMismatch("one goal region per tracked intention is required");
  const auto lik = scaled_likelihoods(goal_log_likelihoods(w, goals, cfg.tp, params));
  return mif_step(std::move(ps), lik, cfg.alpha, ess_fraction);
}

}  // namespace hit::prediction
