#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/filter.hpp"
#include "hit/prediction/high_level.hpp"
#include "hit/prediction/mif.hpp"

namespace hit::prediction {

struct TrackerConfig {
  FilterConfig low{5, 1.0 / 30.0, 0.985};
  std::size_t particles = 1000;
  double ess_fraction = 0.5;
  GilmParams low_gilm{};
  HighLevelConfig high{};
  GilmParams high_gilm{};
  bool high_enabled = true;
};

/// Two-level intention tracker fed one smoothed wrist sample per tick.
///
/// The low level runs the particle filter once every `low.tp` new samples;
/// the high level runs every `high.tp` samples against the prediction-step
/// output of the latest low-level posterior.
class HierarchicalTracker {
 public:
  struct TickResult {
    bool low_updated = false;
    bool high_updated = false;
    bool low_reset = false;
    bool high_degenerate = false;
    bool link_fallback = false;
  };

  HierarchicalTracker(TrackerConfig cfg, std::vector<GoalRegion> task_goals, std::uint64_t seed)
      : cfg_(std::move(cfg)),
        goals_(std::move(task_goals)),
        window_(window_capacity(cfg_)),
        particles_(core::IntentionSpace::task(), cfg_.particles, seed),
        low_(core::Posterior::uniform(core::IntentionSpace::task())),
        high_(core::Posterior::point_mass(core::IntentionSpace::high_level(), 0)) {
    cfg_.low.validate();
    cfg_.low_gilm.validate();
    cfg_.high_gilm.validate();
    if (goals_.size() != core::IntentionSpace::task().size())
      throw DimensionMismatch("tracker needs one goal region per task intention");
  }

  TickResult tick(double t, const Vec2& wrist, const Vec2& ee) {
    TickResult r;
    window_.push(t, wrist, ee);
    ++since_low_;
    ++since_high_;
    if (since_low_ >= cfg_.low.tp && window_.size() >= static_cast<std::size_t>(cfg_.low.tp) + 1) {
      auto step = mif_step(std::move(particles_), window_, goals_, cfg_.low, cfg_.low_gilm, cfg_.ess_fraction);
      particles_ = std::move(step.particles);
      low_ = std::move(step.posterior);
      r.low_updated = true;
      r.low_reset = step.reset;
      since_low_ = 0;
    }
    if (cfg_.high_enabled && since_high_ >= cfg_.high.tp &&
        window_.size() >= static_cast<std::size_t>(cfg_.high.tp) + 1) {
      const auto low_pred = low_predicted();
      try {
        auto step = high_level_step(high_, window_, low_pred, goals_, cfg_.high, cfg_.high_gilm);
        high_ = std::move(step.posterior);
        r.link_fallback = step.link_fallback;
      } catch (const DegenerateEvidence&) {
        high_ = core::predict(high_, core::transition_matrix(2, cfg_.high.alpha));
        r.high_degenerate = true;
      }
      r.high_updated = true;
      since_high_ = 0;
    }
    return r;
  }

  /// Level-1 prediction-step output (with an FR slot) feeding the high level.
  core::Posterior low_predicted() const {
    return with_fr_slot(core::predict(low_, core::transition_matrix(static_cast<int>(low_.size()), cfg_.low.alpha)));
  }

  const core::Posterior& low() const { return low_; }
  const core::Posterior& high() const { return high_; }
  const ParticleSet& particles() const { return particles_; }
  const ObservationWindow& window() const { return window_; }
  const TrackerConfig& config() const { return cfg_; }

 private:
  static std::size_t window_capacity(const TrackerConfig& c) {
    const int need = std::max({c.low_gilm.speed_window, c.high_gilm.speed_window, c.low.tp + 1, c.high.tp + 1});
    return static_cast<std::size_t>(need) + 8;
  }

  TrackerConfig cfg_;
  std::vector<GoalRegion> goals_;
  ObservationWindow window_;
  ParticleSet particles_;
  core::Posterior low_;
  core::Posterior high_;
  int since_low_ = 0;
  int since_high_ = 0;
};

}  // namespace hit::prediction
