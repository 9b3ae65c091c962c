#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/intention.hpp"
#include "hit/sim/human.hpp"
#include "hit/sim/observe.hpp"
#include "hit/sim/rng.hpp"
#include "hit/sim/workcell.hpp"

namespace hit::sim {

/// How the simulated human plans and reacts.
struct HumanScenario {
  std::vector<int> order;  ///< alignment order; empty draws a random permutation
  std::vector<ScheduleItem> script;  ///< fixed plan replacing the sampled one; no idle planning
  double prep_dwell_min = 1.5, prep_dwell_max = 2.5;
  double align_dwell_min = 4.0, align_dwell_max = 5.0;
  double realign_dwell = 2.0;
  double readjust_dwell = 1.5;
  double readjust_prob = 0.8;   ///< coexistence: chance to fix a visibly offset push
  int max_readjust = 2;         ///< per part
  double visible_offset = 0.01; ///< offsets above this are noticed (m)
  double nudge_after = 3.0;     ///< idle robot with an aligned part: show it again after this long
  int max_nudges = 3;
  HumanParams motion{};
  ObserveParams observe{};

  void validate() const {
    motion.validate();
    if (!(prep_dwell_min > 0.0 && prep_dwell_max >= prep_dwell_min && align_dwell_min > 0.0 &&
          align_dwell_max >= align_dwell_min && realign_dwell > 0.0 && readjust_dwell > 0.0))
      throw InvalidParameter("dwell times must be positive ranges");
    std::vector<int> o = order;
    std::sort(o.begin(), o.end());
    if (!o.empty() && o != std::vector<int>{1, 2, 3, 4}) throw InvalidParameter("order must be a permutation of 1..4");
    for (const auto& it : script) {
      if (it.kind != ItemKind::Prep && it.kind != ItemKind::Guide && (it.part < 1 || it.part > 4))
        throw InvalidParameter("script items at a part need part in 1..4");
      if (it.kind == ItemKind::Guide && (it.part < 0 || it.part > 4)) throw InvalidParameter("guide part must be 0..4");
      if (it.kind != ItemKind::Guide && !(it.dwell > 0.0)) throw InvalidParameter("script dwell must be > 0");
    }
  }
};

struct WorldConfig {
  WorkcellConfig cell{};
  HumanScenario human{};
  double max_time = 600.0;
};

/// One tick of the event log.
struct TickRecord {
  std::int64_t tick = 0;
  double t = 0.0;
  Vec2 wrist = Vec2::Zero();
  std::optional<Vec2> raw;
  std::optional<Vec2> smooth;
  Vec2 ee = Vec2::Zero();
  Vec2 ee_vel = Vec2::Zero();
  Mode mode = Mode::CE;
  std::optional<std::array<double, 5>> post1;
  std::optional<std::array<double, 2>> post2;
  std::vector<int> task_set, ongoing, ready, done;
  std::array<PartState, 4> parts{};
  std::vector<std::string> events;
  std::optional<core::Label> gt_low;
  std::optional<core::Label> gt_high;
  Vec2 pull = Vec2::Zero();
  bool contact = false;
};

/// Fills the robot-side fields of a record from a workcell.
inline void fill_from_cell(TickRecord& r, const Workcell& cell) {
  r.tick = cell.ticks();
  r.t = cell.t();
  r.smooth = cell.smoothed();
  r.ee = cell.ee();
  r.ee_vel = cell.ee_velocity();
  r.mode = cell.mode();
  if (const auto* tr = cell.tracker()) {
    std::array<double, 5> p1{};
    for (std::size_t i = 0; i < 5; ++i) p1[i] = tr->low()[i];
    r.post1 = p1;
    if (cell.high_enabled()) r.post2 = std::array<double, 2>{tr->high()[0], tr->high()[1]};
  }
  const auto& q = cell.queues();
  r.task_set = q.task_set;
  r.ongoing.assign(q.ongoing.begin(), q.ongoing.end());
  r.ready.assign(q.ready.begin(), q.ready.end());
  r.done = q.done;
  r.parts = cell.parts();
  for (const auto& e : cell.events()) r.events.push_back(e.str());
  r.contact = cell.contact();
}

/// Closed-loop simulation: a scripted human, noisy perception, the robot.
class World {
 public:
  World(WorldConfig cfg, std::uint64_t seed)
      : cfg_(std::move(cfg)),
        cell_(cfg_.cell, seed),
        human_rng_(split_seed(seed, kHumanStream)),
        observe_rng_(split_seed(seed, kObserveStream)),
        react_rng_(split_seed(seed, kReactStream)) {
    cfg_.human.validate();
    if (!(cfg_.max_time > 0.0)) throw InvalidParameter("max_time must be > 0");
    human_.wrist = cfg_.cell.workspace.prep.center;
    build_schedule();
  }

  /// human_step -> observe -> robot tick (smoothing, trackers, queues, mode,
  /// motion, pushes) -> human reactions.
  TickRecord step() {
    const double dt = cfg_.cell.dt;
    auto hs = human_step(human_, view(), cfg_.cell.workspace, cfg_.human.motion, dt, human_rng_);
    if (hs.finished && hs.finished->kind == ItemKind::Readjust) cell_.release_push();

    TickRecord rec;
    rec.wrist = human_.wrist;
    rec.raw = observe(human_.wrist, cfg_.human.observe, observe_rng_);
    rec.gt_low = item_label(human_.current);
    rec.gt_high = human_.current.kind == ItemKind::Guide ? core::Label::CO : core::Label::CE;

    TickInput in;
    in.measurement = rec.raw;
    in.wrist = human_.wrist;
    in.pressed = human_.pressed;
    in.pull = human_.pull;
    cell_.tick(in);
    fill_from_cell(rec, cell_);
    rec.pull = cell_.contact() ? human_.pull : Vec2::Zero();

    for (const auto& e : cell_.events()) react_to(e);
    plan_idle();
    return rec;
  }

  bool finished() const {
    if (cell_.pushing()) return false;
    switch (cfg_.cell.variant) {
      case Variant::Coexistence: return cell_.all_parts_pushed() && cell_.at_home();
      case Variant::Cooperation:
        return cell_.all_parts_ok() && cell_.at_home() && !cell_.admittance_active() && human_.idle;
      default: return cell_.all_parts_ok() && cell_.at_home() && cell_.mode() == Mode::CE;
    }
  }
  bool timed_out() const { return cell_.t() >= cfg_.max_time - 1e-9; }

  const Workcell& cell() const { return cell_; }
  const HumanAgent& human() const { return human_; }
  const WorldConfig& config() const { return cfg_; }
  const std::vector<int>& order() const { return order_; }
  int readjustments() const { return std::accumulate(readjusts_.begin(), readjusts_.end(), 0); }

 private:
  RobotView view() const {
    RobotView v;
    v.ee = cell_.ee();
    v.home = cfg_.cell.robot.home;
    v.mode = cell_.mode();
    v.busy = cell_.busy();
    v.admittance_active = cell_.admittance_active();
    v.gate_guidance = cfg_.cell.variant == Variant::Hit;
    return v;
  }

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return u(react_rng_);
  }

  void build_schedule() {
    const auto& h = cfg_.human;
    if (!h.script.empty()) {
      for (const auto& it : h.script) {
        human_.schedule.push_back(it);
        if (it.kind == ItemKind::Align) order_.push_back(it.part);
      }
      return;
    }
    order_ = h.order;
    if (order_.empty()) {
      order_ = {1, 2, 3, 4};
      std::shuffle(order_.begin(), order_.end(), react_rng_);
    }
    for (int p : order_) {
      human_.schedule.push_back(prep_item(uniform(h.prep_dwell_min, h.prep_dwell_max)));
      human_.schedule.push_back(align_item(p, uniform(h.align_dwell_min, h.align_dwell_max)));
      if (cfg_.cell.variant == Variant::Cooperation) human_.schedule.push_back(guide_item(p));
    }
    if (cfg_.cell.variant == Variant::Cooperation) human_.schedule.push_back(guide_item(0));
  }

  void react_to(const CellEvent& e) {
    if (e.tag != "arrived" || cfg_.cell.variant != Variant::Coexistence) return;
    auto& n = readjusts_[static_cast<std::size_t>(e.part - 1)];
    const bool visible = cell_.push_offset().norm() > cfg_.human.visible_offset;
    const double u = uniform(0.0, 1.0);
    if (n >= cfg_.human.max_readjust || !visible || u >= cfg_.human.readjust_prob) return;
    ++n;
    cell_.hold_push();
    if (!human_.idle) {
      auto resume = human_.current;
      resume.dwell = std::max(0.5, resume.dwell - human_.dwell_elapsed);
      human_.schedule.push_front(resume);
    }
    human_.schedule.push_front({ItemKind::Readjust, e.part, cfg_.human.readjust_dwell});
    human_.idle = true;
    human_advance(human_, view(), cfg_.cell.workspace, cfg_.human.motion, human_rng_);
  }

  // Extra work the human notices while idle at the preparation area.
  void plan_idle() {
    if (!cfg_.human.script.empty()) return;
    if (!human_.idle || !human_.schedule.empty()) {
      idle_robot_since_.reset();
      return;
    }
    const auto v = cfg_.cell.variant;
    const auto& h = cfg_.human;
    if (v == Variant::Hit || v == Variant::Cooperation) {
      for (int p = 1; p <= 4; ++p) {
        if (cell_.part(p) != PartState::PushedFailed) continue;
        human_.schedule.push_back(align_item(p, h.realign_dwell));
        human_.schedule.push_back(guide_item(p));
        return;
      }
    }
    if (v == Variant::Cooperation) {
      if (!cell_.all_parts_ok() || cell_.at_home() || cell_.admittance_active()) return;
      if (home_guides_ >= 3) return;
      ++home_guides_;
      human_.schedule.push_back(guide_item(0));
      return;
    }
    for (int p = 1; p <= 4; ++p) {
      if (cell_.part(p) != PartState::Unaligned) continue;
      human_.schedule.push_back(align_item(p, uniform(h.align_dwell_min, h.align_dwell_max)));
      return;
    }
    // An aligned part the robot never picked up: show it again.
    if (cell_.busy() || cell_.mode() != Mode::CE) {
      idle_robot_since_.reset();
      return;
    }
    if (!idle_robot_since_) idle_robot_since_ = cell_.t();
    if (cell_.t() - *idle_robot_since_ < h.nudge_after) return;
    for (int p = 1; p <= 4; ++p) {
      auto& n = nudges_[static_cast<std::size_t>(p - 1)];
      if (cell_.part(p) != PartState::Aligned || n >= h.max_nudges) continue;
      ++n;
      human_.schedule.push_back(align_item(p, uniform(h.align_dwell_min, h.align_dwell_max)));
      idle_robot_since_.reset();
      return;
    }
  }

  WorldConfig cfg_;
  Workcell cell_;
  HumanAgent human_;
  std::mt19937_64 human_rng_;
  std::mt19937_64 observe_rng_;
  std::mt19937_64 react_rng_;
  std::vector<int> order_;
  std::array<int, 4> readjusts_{};
  std::array<int, 4> nudges_{};
  int home_guides_ = 0;
  std::optional<double> idle_robot_since_;
};

/// One full tick of the simulation.
inline TickRecord world_step(World& w) { return w.step(); }

}  // namespace hit::sim
