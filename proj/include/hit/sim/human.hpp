#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>

#include "hit/core/error.hpp"
#include "hit/core/intention.hpp"
#include "hit/prediction/gilm.hpp"
#include "hit/sim/control.hpp"
#include "hit/sim/workspace.hpp"

namespace hit::sim {

enum class ItemKind { Prep, Align, Readjust, Guide };

/// One entry of the human's plan. Guide with part 0 steers the robot home.
struct ScheduleItem {
  ItemKind kind = ItemKind::Prep;
  int part = 0;
  double dwell = 0.0;  ///< seconds inside the region (ignored for Guide)
};

inline const char* to_string(ItemKind k) {
  switch (k) {
    case ItemKind::Prep: return "prep";
    case ItemKind::Align: return "align";
    case ItemKind::Readjust: return "readjust";
    default: return "guide";
  }
}

inline ScheduleItem prep_item(double dwell) { return {ItemKind::Prep, 0, dwell}; }
inline ScheduleItem align_item(int part, double dwell) { return {ItemKind::Align, part, dwell}; }
inline ScheduleItem guide_item(int part) { return {ItemKind::Guide, part, 0.0}; }

/// Ground-truth task label of an item; none while guiding the robot.
inline std::optional<core::Label> item_label(const ScheduleItem& it) {
  switch (it.kind) {
    case ItemKind::Prep: return core::Label::Prep;
    case ItemKind::Align:
    case ItemKind::Readjust: return core::part_label(it.part);
    default: return std::nullopt;
  }
}

struct HumanParams {
  double cruise = 0.35;       ///< peak wrist speed (m/s)
  double approach_gain = 4.0; ///< speed = min(cruise, gain * distance)
  double noise_std = 0.0015;  ///< per-step motion noise (m)
  double aim_std = 0.012;     ///< spread of the aim point inside a region (m)
  double clearance = 0.07;    ///< distance kept from a coexisting robot
  double standoff = 0.09;     ///< where the wrist waits while the robot still coexists
  double pull_gain = 30.0;
  double pull_min = 0.6;
  double pull_max = 3.0;
  double deadband = 0.005;    ///< pull stops (and stays off) once this close
  double reach = 0.035;       ///< grasp distance when reaching for a cooperating robot

  void validate() const {
    if (!(cruise > 0.0 && approach_gain > 0.0)) throw InvalidParameter("human speeds must be > 0");
    if (!(noise_std >= 0.0 && aim_std >= 0.0)) throw InvalidParameter("human noise must be >= 0");
    if (!(pull_max >= pull_min && pull_min >= 0.0)) throw InvalidParameter("need 0 <= pull_min <= pull_max");
  }
};

/// What the human sees of the robot each tick.
struct RobotView {
  Vec2 ee = Vec2::Zero();
  Vec2 home = Vec2::Zero();
  Mode mode = Mode::CE;
  bool busy = false;
  bool admittance_active = false;
  bool gate_guidance = true;  ///< wait for an idle robot before guiding
};

struct HumanAgent {
  Vec2 wrist = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  std::deque<ScheduleItem> schedule;
  ScheduleItem current = prep_item(std::numeric_limits<double>::infinity());
  bool idle = true;  ///< holding at the preparation area with nothing scheduled
  Vec2 aim = Vec2::Zero();
  double dwell_elapsed = 0.0;
  bool pressed = false;
  bool guided = false;    ///< robot accepted the guidance at least once
  bool released = false;  ///< reached the goal and let go of the robot
  Vec2 pull = Vec2::Zero();
};

struct HumanStep {
  std::optional<ScheduleItem> finished;
  std::optional<ScheduleItem> started;
};

namespace detail {

template <class Rng>
Vec2 draw_aim(const Rect& r, double spread, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double a = n(rng), b = n(rng);
  const Vec2 lim = 0.5 * r.size - Vec2::Constant(0.01);
  return {std::clamp(spread * a, -lim.x(), lim.x()), std::clamp(spread * b, -lim.y(), lim.y())};
}

inline bool guide_allowed(const RobotView& v) {
  return !v.gate_guidance || !v.busy || v.mode == Mode::CO;
}

// Keeps clear of a coexisting robot: never steps closer than the clearance.
inline Vec2 keep_clearance(const Vec2& next, const Vec2& before, const Vec2& ee, double clearance) {
  const Vec2 d = next - ee;
  const double floor = std::min(clearance, (before - ee).norm());
  if (d.norm() >= floor) return next;
  const Vec2 back = before - ee;
  const Vec2 dir = d.norm() > 1e-9 ? Vec2(d.normalized()) : (back.norm() > 1e-9 ? Vec2(back.normalized()) : Vec2(0, -1));
  return ee + dir * floor;
}

}  // namespace detail

/// Starts the next schedule item, or idles at the preparation area.
template <class Rng>
std::optional<ScheduleItem> human_advance(HumanAgent& h, const RobotView& view, const Workspace& ws,
                                          const HumanParams& p, Rng& rng) {
  if (!h.schedule.empty() && (h.schedule.front().kind != ItemKind::Guide || detail::guide_allowed(view))) {
    h.current = h.schedule.front();
    h.schedule.pop_front();
    h.idle = false;
  } else {
    if (h.idle) return std::nullopt;
    h.current = prep_item(std::numeric_limits<double>::infinity());
    h.idle = true;
  }
  h.dwell_elapsed = 0.0;
  h.guided = false;
  h.released = false;
  h.pressed = false;
  h.pull = Vec2::Zero();
  if (h.current.kind == ItemKind::Prep) {
    h.aim = detail::draw_aim(ws.prep, p.aim_std, rng);
  } else if (h.current.kind != ItemKind::Guide) {
    h.aim = detail::draw_aim(ws.part(h.current.part), p.aim_std, rng);
  }
  return h.current;
}

/// Guidance force: toward the push point (or home), saturated, zero inside
/// the deadband so the robot comes to rest.
inline Vec2 guidance_pull(const Vec2& ee, const Vec2& goal, const HumanParams& p) {
  const Vec2 e = goal - ee;
  const double d = e.norm();
  if (d < p.deadband) return Vec2::Zero();
  return e / d * std::clamp(p.pull_gain * d, p.pull_min, p.pull_max);
}

/// Advances the wrist one tick. Motion follows the same constant-speed
/// goal-directed law the tracker assumes, toward the current item's aim
/// point, or toward the end-effector while reaching for cooperation.
template <class Rng>
HumanStep human_step(HumanAgent& h, const RobotView& view, const Workspace& ws, const HumanParams& p, double dt,
                     Rng& rng) {
  if (!(dt > 0.0)) throw InvalidParameter("human_step needs dt > 0");
  HumanStep out;
  if (h.idle && !h.schedule.empty()) out.started = human_advance(h, view, ws, p, rng);

  const Vec2 before = h.wrist;
  std::normal_distribution<double> n(0.0, p.noise_std);
  const double nx = n(rng), ny = n(rng);
  const Vec2 noise(nx, ny);

  if (h.current.kind == ItemKind::Guide) {
    const Vec2 goal = h.current.part > 0 ? ws.push_point(h.current.part) : view.home;
    if (h.guided && !view.admittance_active) {
      out.finished = h.current;
      h.pressed = false;
      h.pull = Vec2::Zero();
      out.started = human_advance(h, view, ws, p, rng);
    } else if (view.admittance_active) {
      h.guided = true;
      h.pressed = true;
      if ((goal - view.ee).norm() < p.deadband) h.released = true;
      h.pull = h.released ? Vec2::Zero() : guidance_pull(view.ee, goal, p);
      h.wrist = view.ee;
    } else {
      h.pull = Vec2::Zero();
      Vec2 target = view.ee;
      if (view.mode == Mode::CE) {
        const Vec2 d = h.wrist - view.ee;
        const Vec2 dir = d.norm() > 1e-9 ? Vec2(d.normalized()) : Vec2(0.0, -1.0);
        target = view.ee + p.standoff * dir;
      }
      const double dist = (target - h.wrist).norm();
      const double speed = std::min(p.cruise, p.approach_gain * dist);
      h.wrist = prediction::gilm_step(h.wrist, {target, Mat2::Zero(), prediction::RegionKind::FollowRobot}, speed, dt,
                                      noise);
      if (view.mode == Mode::CE) h.wrist = detail::keep_clearance(h.wrist, before, view.ee, p.clearance);
      h.pressed = view.mode == Mode::CO && (h.wrist - view.ee).norm() < p.reach;
    }
  }

  if (h.current.kind != ItemKind::Guide) {
    const Rect& region = h.current.kind == ItemKind::Prep ? ws.prep : ws.part(h.current.part);
    const Vec2 target = region.center + h.aim;
    const double dist = (target - h.wrist).norm();
    const double speed = std::min(p.cruise, p.approach_gain * dist);
    h.wrist = prediction::gilm_step(h.wrist, {target, Mat2::Zero(), prediction::RegionKind::StaticTaskGoal}, speed, dt,
                                    noise);
    if (view.mode == Mode::CE) h.wrist = detail::keep_clearance(h.wrist, before, view.ee, p.clearance);
    if (region.contains(h.wrist)) h.dwell_elapsed += dt;
    if (!h.idle && h.dwell_elapsed >= h.current.dwell - 1e-9) {
      out.finished = h.current;
      out.started = human_advance(h, view, ws, p, rng);
    } else if (h.idle && !h.schedule.empty()) {
      out.started = human_advance(h, view, ws, p, rng);
    }
  }
  h.wrist = ws.table.clamp(h.wrist);
  h.velocity = (h.wrist - before) / dt;
  return out;
}

}  // namespace hit::sim
