#pragma once

#include <functional>

#include "hit/harness/config.hpp"
#include "hit/harness/trial_log.hpp"
#include "hit/sim/world.hpp"

namespace hit::harness {

/// Runs one closed-loop trial to completion or the time cap.
/// `on_tick`, if given, sees each record as it is produced.
inline TrialLog run_trial(const ScenarioConfig& cfg,
                          const std::function<void(const sim::TickRecord&)>& on_tick = {}) {
  validate(cfg);
  sim::World world(cfg.world, cfg.seed);
  TrialLog log;
  log.variant = cfg.variant();
  log.seed = cfg.seed;
  log.dt = cfg.world.cell.dt;
  log.ee0 = world.cell().ee();
  log.order = world.order();
  log.config = config_to_json(cfg);
  const auto cap = static_cast<std::size_t>(std::ceil(cfg.world.max_time / cfg.world.cell.dt - 1e-9));
  log.records.reserve(std::min<std::size_t>(cap, 1 << 16));
  while (!world.finished() && !world.timed_out()) {
    log.records.push_back(world.step());
    if (on_tick) on_tick(log.records.back());
  }
  log.ended = true;
  log.completed = world.finished();
  log.end_time = world.cell().t();
  return log;
}

}  // namespace hit::harness
