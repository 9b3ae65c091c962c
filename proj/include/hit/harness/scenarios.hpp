#pragma once

#include <optional>

#include "hit/harness/config.hpp"
#include "hit/sim/world.hpp"

namespace hit::harness {

/// Scripted assembly: parts aligned in the order 2, 3, 1, 4; the pushes on
/// parts 2 and 3 fail and are recovered by guidance.
inline ScenarioConfig fig5_scenario(std::uint64_t seed = 0) {
  ScenarioConfig c;
  c.name = "fig5";
  c.seed = seed;
  c.world.cell.variant = sim::Variant::Hit;
  c.world.cell.injected_failures = {2, 3};
  c.world.cell.robot.push.noise = 0.0;
  c.world.human.order = {2, 3, 1, 4};
  return c;
}

/// Idle robot at home; the human waits at the preparation area, then walks up
/// and takes hold of the end-effector.
inline ScenarioConfig approach_scenario(std::uint64_t seed = 0) {
  ScenarioConfig c;
  c.name = "approach";
  c.seed = seed;
  c.world.cell.variant = sim::Variant::Hit;
  c.world.max_time = 30.0;
  c.world.human.script = {sim::prep_item(3.0), sim::guide_item(0)};
  return c;
}

struct ApproachResult {
  std::optional<double> onset;      ///< human starts toward the robot
  std::optional<double> crossing;   ///< first P(CO) > threshold after onset
  std::optional<double> switched;   ///< mode becomes CO
  std::optional<double> latency() const {
    if (!onset || !crossing) return std::nullopt;
    return *crossing - *onset;
  }
  std::optional<double> sustain() const {
    if (!crossing || !switched) return std::nullopt;
    return *switched - *crossing;
  }
};

/// Steps the world until the robot enters cooperation (plus one second) or
/// the time cap; times are on the world clock.
inline ApproachResult run_approach(const ScenarioConfig& cfg, double threshold = 0.9) {
  validate(cfg);
  sim::World w(cfg.world, cfg.seed);
  ApproachResult out;
  while (!w.timed_out()) {
    const auto r = w.step();
    if (!out.onset && r.gt_high == core::Label::CO) out.onset = r.t;
    if (out.onset && !out.crossing && r.post2 && (*r.post2)[1] > threshold) out.crossing = r.t;
    if (!out.switched && r.mode == sim::Mode::CO) out.switched = r.t;
    if (out.switched && r.t > *out.switched + 1.0) break;
  }
  return out;
}

}  // namespace hit::harness
