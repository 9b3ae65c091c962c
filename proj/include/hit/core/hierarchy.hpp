#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/filter.hpp"
#include "hit/core/intention.hpp"

namespace hit::core {

/// P(g^l | x_{1:t}, g^{l+1}) for both interactive intentions.
struct LinkDistribution {
  IntentionSpace low_space;
  std::vector<double> ce_row;
  std::vector<double> co_row;
  /// CE row fell back to uniform because the task goals carried no mass.
  bool ce_fallback = false;

  std::span<const double> row(Label high) const {
    if (high == Label::CE) return ce_row;
    if (high == Label::CO) return co_row;
    throw InvalidParameter("link rows exist only for CE and CO");
  }
};

/// Builds the CE/CO link from the level-1 prediction-step output. CO pins
/// all mass on FR; CE is the prediction restricted to the task intentions.
inline LinkDistribution link_distribution(const Posterior& low_predicted) {
  const auto& space = low_predicted.space();
  if (space.level() != 1) throw InvalidParameter("link distribution needs a level-1 posterior");
  auto fr = space.index_of(Label::FR);
  if (!fr) throw InvalidParameter("level-1 space must contain FR to build the CE/CO link");

  const auto m = space.size();
  LinkDistribution link{space, std::vector<double>(m, 0.0), std::vector<double>(m, 0.0), false};
  link.co_row[*fr] = 1.0;

  double task_mass = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (i != *fr) task_mass += low_predicted[i];
  if (task_mass > 0.0) {
    for (std::size_t i = 0; i < m; ++i)
      if (i != *fr) link.ce_row[i] = low_predicted[i] / task_mass;
  } else {
    link.ce_fallback = true;
    for (std::size_t i = 0; i < m; ++i)
      if (i != *fr) link.ce_row[i] = 1.0 / static_cast<double>(m - 1);
  }
  return link;
}

/// sum_g P(x | g^l) P(g^l | ..., g^{l+1}) for one row of the link.
inline double hierarchical_likelihood(std::span<const double> low_likelihoods, std::span<const double> link_row) {
  if (low_likelihoods.size() != link_row.size())
    throw DimensionMismatch("likelihood vector and link row differ in length");
  double acc = 0.0;
  for (std::size_t i = 0; i < link_row.size(); ++i) acc += low_likelihoods[i] * link_row[i];
  return acc;
}

/// Same mixture with log-likelihood inputs (log-sum-exp), for densities that
/// would underflow in linear space.
inline double hierarchical_log_likelihood(std::span<const double> low_log_likelihoods, std::span<const double> link_row) {
  if (low_log_likelihoods.size() != link_row.size())
    throw DimensionMismatch("likelihood vector and link row differ in length");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double peak = kNegInf;
  for (std::size_t i = 0; i < link_row.size(); ++i)
    if (link_row[i] > 0.0 && low_log_likelihoods[i] > peak) peak = low_log_likelihoods[i];
  if (peak == kNegInf) return kNegInf;
  double acc = 0.0;
  for (std::size_t i = 0; i < link_row.size(); ++i)
    if (link_row[i] > 0.0) acc += link_row[i] * std::exp(low_log_likelihoods[i] - peak);
  return peak + std::log(acc);
}

}  // namespace hit::core
