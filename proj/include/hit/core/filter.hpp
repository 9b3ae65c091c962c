#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/intention.hpp"

namespace hit::core {

/// Time-invariant intention dynamics: stay with probability alpha, otherwise
/// move uniformly to one of the other m-1 intentions.
class TransitionModel {
 public:
  TransitionModel(int m, double alpha) : m_(m), alpha_(alpha) {
    if (m < 2) throw InvalidParameter("transition model needs m >= 2, got " + std::to_string(m));
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidParameter("alpha must lie in [0, 1]");
  }

  int m() const { return m_; }
  double alpha() const { return alpha_; }
  double stay() const { return alpha_; }
  double move() const { return (1.0 - alpha_) / static_cast<double>(m_ - 1); }

  double operator()(std::size_t from, std::size_t to) const { return from == to ? stay() : move(); }

  std::vector<std::vector<double>> dense() const {
    std::vector<std::vector<double>> out(m_, std::vector<double>(m_));
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

 private:
  int m_;
  double alpha_;
};

inline TransitionModel transition_matrix(int m, double alpha) { return {m, alpha}; }

/// Probability vector over an intention space at one tracking step.
class Posterior {
 public:
  Posterior(IntentionSpace space, std::vector<double> probs, std::int64_t step = 0)
      : space_(std::move(space)), probs_(std::move(probs)), step_(step) {
    if (probs_.size() != space_.size())
      throw DimensionMismatch("posterior has " + std::to_string(probs_.size()) + " entries for a space of " +
                              std::to_string(space_.size()));
    double s = 0.0;
    for (double p : probs_) {
      if (!std::isfinite(p) || p < 0.0) throw NumericError("posterior entries must be finite and >= 0");
      s += p;
    }
    if (std::abs(s - 1.0) > 1e-9) throw InvalidParameter("posterior must sum to 1, got " + std::to_string(s));
  }

  static Posterior uniform(const IntentionSpace& space) {
    return {space, std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size()))};
  }
  static Posterior point_mass(const IntentionSpace& space, std::size_t index) {
    std::vector<double> p(space.size(), 0.0);
    p.at(index) = 1.0;
    return {space, std::move(p)};
  }
  /// Normalizes nonnegative weights into a posterior.
  static Posterior from_weights(const IntentionSpace& space, std::span<const double> w, std::int64_t step = 0) {
    double s = 0.0;
    for (double x : w) {
      if (!std::isfinite(x) || x < 0.0) throw NumericError("weights must be finite and >= 0");
      s += x;
    }
    if (!(s > 0.0)) throw DegenerateEvidence("all weights are zero");
    std::vector<double> p(w.begin(), w.end());
    for (double& x : p) x /= s;
    return {space, std::move(p), step};
  }

  const IntentionSpace& space() const { return space_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t i) const { return probs_.at(i); }
  double prob(Label l) const {
    auto i = space_.index_of(l);
    return i ? probs_[*i] : 0.0;
  }
  std::size_t size() const { return probs_.size(); }
  std::int64_t step() const { return step_; }

 private:
  IntentionSpace space_;
  std::vector<double> probs_;
  std::int64_t step_;
};

/// Prediction step: P(g_{t+Tp}) = sum_g T(g -> g') P(g_t).
inline Posterior predict(const Posterior& prior, const TransitionModel& T) {
  const auto m = prior.size();
  if (static_cast<std::size_t>(T.m()) != m)
    throw DimensionMismatch("transition model is " + std::to_string(T.m()) + "-state, posterior has " +
                            std::to_string(m));
  auto p = prior.probs();
  std::vector<double> out(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += T(i, j) * p[i];
    out[j] = acc;
  }
  // Symmetric row-stochastic T preserves the mass; renormalize away rounding.
  double s = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x /= s;
  return {prior.space(), std::move(out), prior.step() + 1};
}

/// Update step: posterior proportional to likelihood times prediction.
inline Posterior update(const Posterior& predicted, std::span<const double> likelihoods) {
  const auto m = predicted.size();
  if (likelihoods.size() != m)
    throw DimensionMismatch("expected " + std::to_string(m) + " likelihoods, got " + std::to_string(likelihoods.size()));
  std::vector<double> w(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double l = likelihoods[i];
    if (!std::isfinite(l) || l < 0.0) throw NumericError("likelihoods must be finite and >= 0");
    w[i] = l * predicted[i];
    s += w[i];
  }
  if (!(s > 0.0)) throw DegenerateEvidence("evidence assigns zero mass to every predicted intention");
  for (double& x : w) x /= s;
  return {predicted.space(), std::move(w), predicted.step()};
}

/// Index of the most probable intention; ties go to the lowest index.
inline std::size_t map_index(std::span<const double> probs) {
  if (probs.empty()) throw DimensionMismatch("empty probability vector");
  std::size_t best = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i])) throw NumericError("non-finite probability at index " + std::to_string(i));
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

inline Label map_intention(const Posterior& p) { return p.space().label(map_index(p.probs())); }

}  // namespace hit::core
