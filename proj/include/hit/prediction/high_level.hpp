#pragma once

#include <array>
#include <span>
#include <vector>

#include "hit/core/filter.hpp"
#include "hit/core/hierarchy.hpp"
#include "hit/prediction/gilm.hpp"
#include "hit/prediction/mif.hpp"

namespace hit::prediction {

struct HighLevelConfig {
  int tp = 6;          ///< samples in one 0.2 s stride at 30 Hz
  double alpha = 0.99;
  Mat2 fr_cov = Mat2::Identity() * (0.03 * 0.03);
};

struct HighLevelStep {
  core::Posterior predicted;
  core::Posterior posterior;
  double log_lik_ce = 0.0;
  double log_lik_co = 0.0;
  bool link_fallback = false;
};

/// One 5 Hz update of the interactive intention.
///
/// `low_predicted` is the concurrent level-1 prediction-step output over a
/// space containing FR; `task_goals` lists the goal regions of that space's
/// non-FR labels in order. The CO likelihood is the GILM under the FR region
/// around the current end-effector; the CE likelihood mixes task-goal GILM
/// likelihoods with the CE row of the link.
inline HighLevelStep high_level_step(const core::Posterior& prior, const ObservationWindow& w,
                                     const core::Posterior& low_predicted, std::span<const GoalRegion> task_goals,
                                     const HighLevelConfig& cfg, const GilmParams& params) {
  const auto& high = prior.space();
  const auto ce = high.index_of(core::Label::CE).value();
  const auto co = high.index_of(core::Label::CO).value();

  const auto link = core::link_distribution(low_predicted);
  const auto& low = low_predicted.space();
  const auto fr = low.index_of(core::Label::FR).value();
  if (task_goals.size() + 1 != low.size())
    throw DimensionMismatch("need one goal region per non-FR level-1 intention");

  const GoalRegion fr_region = fr_goal_region(w.back().robot_ee, cfg.fr_cov);
  std::vector<double> low_ll(low.size());
  for (std::size_t i = 0, g = 0; i < low.size(); ++i) {
    const GoalRegion& region = (i == fr) ? fr_region : task_goals[g++];
    low_ll[i] = gilm_log_likelihood(w, region, cfg.tp, params);
  }

  std::vector<double> high_ll(2);
  high_ll[ce] = core::hierarchical_log_likelihood(low_ll, link.row(core::Label::CE));
  high_ll[co] = core::hierarchical_log_likelihood(low_ll, link.row(core::Label::CO));

  auto predicted = core::predict(prior, core::transition_matrix(2, cfg.alpha));
  auto posterior = core::update(predicted, scaled_likelihoods(high_ll));
  return {std::move(predicted), std::move(posterior), high_ll[ce], high_ll[co], link.ce_fallback};
}

/// Embeds a task-space posterior into a level-1 space that adds FR with zero
/// mass (the low-level tracker never tracks FR).
inline core::Posterior with_fr_slot(const core::Posterior& task) {
  auto labels = task.space().labels();
  labels.push_back(core::Label::FR);
  std::vector<double> p(task.probs().begin(), task.probs().end());
  p.push_back(0.0);
  return {core::IntentionSpace(1, std::move(labels)), std::move(p), task.step()};
}

}  // namespace hit::prediction
