#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/prediction/tracker.hpp"
#include "hit/sim/control.hpp"
#include "hit/sim/kalman.hpp"
#include "hit/sim/queues.hpp"
#include "hit/sim/rng.hpp"
#include "hit/sim/workspace.hpp"

namespace hit::sim {

enum class Variant { Coexistence, Cooperation, Hit };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::Coexistence: return "coex";
    case Variant::Cooperation: return "coop";
    default: return "hit";
  }
}

enum class PartState { Unaligned, Aligned, PushedOk, PushedFailed };

inline const char* to_string(PartState s) {
  switch (s) {
    case PartState::Unaligned: return "unaligned";
    case PartState::Aligned: return "aligned";
    case PartState::PushedOk: return "pushed-ok";
    default: return "pushed-failed";
  }
}

struct RobotParams {
  Vec2 home{0.0, 0.64};
  double ce_speed = 0.1;       ///< reduced speed while coexisting (m/s)
  double smoothing = 0.7;      ///< k of the velocity running mean
  double recover_radius = 0.05;
  double contact_timeout = 6.0;  ///< CO without contact for this long falls back to CE
  double home_tol = 0.02;
  ApfParams apf{};
  AdmittanceParams admittance{};
  PushParams push{};

  double guided_speed() const { return admittance.speed_limit; }
  void validate() const {
    apf.validate();
    if (!(ce_speed > 0.0 && admittance.speed_limit > ce_speed))
      throw InvalidParameter("need 0 < ce speed limit < guided speed limit");
    if (!(smoothing >= 0.0 && smoothing < 1.0)) throw InvalidParameter("smoothing must lie in [0, 1)");
    if (!(push.noise >= 0.0 && push.tol >= 0.0 && push.duration >= 0.0 && push.arrive_tol > 0.0))
      throw InvalidParameter("push parameters must be nonnegative");
    if (!(admittance.damping > 0.0 && admittance.contact_radius > 0.0))
      throw InvalidParameter("admittance damping and contact radius must be > 0");
  }
};

struct CellEvent {
  std::string tag;
  int part = 0;
  std::string str() const { return part > 0 ? tag + ":" + std::to_string(part) : tag; }
};

struct WorkcellConfig {
  Variant variant = Variant::Hit;
  double dt = 1.0 / 30.0;
  Workspace workspace = Workspace::standard();
  prediction::TrackerConfig tracker{};
  KalmanParams kalman{};
  QueueThresholds queues{};
  ModeThresholds mode{};
  RobotParams robot{};
  std::vector<int> injected_failures;  ///< first CE push on these parts fails
  double align_detect = 1.0;           ///< seconds of dwell that seat a part for alignment
  double shake_prob = 0.0;             ///< per push, chance to knock another aligned part off
};

/// One tick of input to the robot side.
struct TickInput {
  std::optional<Vec2> measurement;  ///< noisy wrist detection, nullopt on dropout
  Vec2 wrist = Vec2::Zero();        ///< true wrist, for contact and part alignment
  bool pressed = false;             ///< human is trying to hold the robot
  Vec2 pull = Vec2::Zero();         ///< pull applied while in contact
};

/// Robot controller, perception and trackers, task queues, assembly status.
class Workcell {
 public:
  Workcell(WorkcellConfig cfg, std::uint64_t seed)
      : cfg_(std::move(cfg)),
        tracker_(make_tracker(cfg_, seed)),
        push_rng_(split_seed(seed, kPushStream)),
        ee_(cfg_.robot.home) {
    if (!(cfg_.dt > 0.0)) throw InvalidParameter("dt must be > 0");
    cfg_.workspace.validate();
    cfg_.robot.validate();
    kf_.params = cfg_.kalman;
    parts_.fill(PartState::Unaligned);
    if (cfg_.variant == Variant::Cooperation) mode_.mode = Mode::CO;
  }

  void tick(const TickInput& in) {
    ++tick_;
    t_ = static_cast<double>(tick_) * cfg_.dt;
    events_.clear();
    const double dt = cfg_.dt;

    if (in.measurement || kf_.initialized) {
      auto [k, pos] = kalman_smooth(kf_, in.measurement, dt);
      kf_ = k;
      smooth_ = pos;
    }
    detect_alignment(in.wrist);

    if (tracker_ && kf_.initialized) {
      last_ = tracker_->tick(t_, *smooth_, ee_);
      if (last_.low_reset) emit("low_reset");
      if (last_.link_fallback) emit("link_fallback");
      if (last_.high_degenerate) emit("high_degenerate");
      queues_ = queue_update(queues_, tracker_->low(), t_, cfg_.queues);
      if (cfg_.variant == Variant::Hit) {
        const auto before = mode_.mode;
        mode_ = mode_switch(mode_, tracker_->high(), t_, false, cfg_.mode);
        if (before == Mode::CE && mode_.mode == Mode::CO) enter_co();
      }
    }
    for (int p : queues_.ongoing)
      if (std::find(seen_ongoing_.begin(), seen_ongoing_.end(), p) == seen_ongoing_.end()) {
        seen_ongoing_.push_back(p);
        emit("ongoing", p);
      }
    for (int p : queues_.ready)
      if (std::find(seen_ready_.begin(), seen_ready_.end(), p) == seen_ready_.end()) {
        seen_ready_.push_back(p);
        emit("ready", p);
      }

    contact_ = in.pressed && (in.wrist - ee_).norm() < cfg_.robot.admittance.contact_radius;
    const Vec2 wrist_hat = smooth_.value_or(in.wrist);
    Vec2 v_cmd = Vec2::Zero();
    bool hold_still = false;
    if (mode_.mode == Mode::CE) {
      hold_still = coexist(wrist_hat, v_cmd);
    } else {
      hold_still = cooperate(in, wrist_hat, v_cmd);
    }

    const double limit = mode_.mode == Mode::CE ? cfg_.robot.ce_speed : cfg_.robot.guided_speed();
    Vec2 v = hold_still ? Vec2::Zero() : clip_norm(smooth_velocity(vel_, v_cmd, cfg_.robot.smoothing), limit);
    if (mode_.mode == Mode::CE && !hold_still) v = keep_clear(v, wrist_hat, dt);
    const Vec2 next = cfg_.workspace.table.clamp(ee_ + v * dt);
    vel_ = (next - ee_) / dt;
    path_ += (next - ee_).norm();
    ee_ = next;

    if (mode_.mode == Mode::CE && target_ && !arrived_ && (ee_ - goal_point()).norm() <= cfg_.robot.push.arrive_tol) {
      arrived_ = true;
      emit("arrived", *target_);
    }
  }

  /// Coexistence readjustment: keeps the robot hovering at its push pose.
  void hold_push() { hold_ = true; }
  /// Human finished readjusting; the part was moved so the offset is redrawn.
  void release_push() {
    hold_ = false;
    if (target_) {
      offset_ = draw_offset(*target_);
      arrived_ = false;
    }
  }

  double t() const { return t_; }
  std::int64_t ticks() const { return tick_; }
  const Vec2& ee() const { return ee_; }
  const Vec2& ee_velocity() const { return vel_; }
  Mode mode() const { return mode_.mode; }
  bool contact() const { return contact_; }
  bool admittance_active() const { return admittance_active_; }
  bool pushing() const { return push_timer_ > 0.0; }
  bool holding() const { return hold_; }
  std::optional<int> target() const { return target_; }
  const Vec2& push_offset() const { return offset_; }
  const TaskQueues& queues() const { return queues_; }
  const std::array<PartState, 4>& parts() const { return parts_; }
  PartState part(int p) const { return parts_.at(static_cast<std::size_t>(p - 1)); }
  bool realigned(int p) const { return realigned_.at(static_cast<std::size_t>(p - 1)); }
  const std::vector<CellEvent>& events() const { return events_; }
  const std::optional<Vec2>& smoothed() const { return smooth_; }
  const prediction::HierarchicalTracker* tracker() const { return tracker_ ? &*tracker_ : nullptr; }
  bool high_enabled() const { return tracker_ && cfg_.variant == Variant::Hit; }
  const WorkcellConfig& config() const { return cfg_; }
  double path_length() const { return path_; }

  /// Robot has queued or in-flight work.
  bool busy() const { return target_ || pushing() || !queues_.ready.empty() || !queues_.ongoing.empty(); }
  bool at_home() const { return (ee_ - cfg_.robot.home).norm() <= cfg_.robot.home_tol; }
  bool all_parts_ok() const {
    return std::all_of(parts_.begin(), parts_.end(), [](PartState s) { return s == PartState::PushedOk; });
  }
  bool all_parts_pushed() const {
    return std::all_of(parts_.begin(), parts_.end(),
                       [](PartState s) { return s == PartState::PushedOk || s == PartState::PushedFailed; });
  }

 private:
  static std::optional<prediction::HierarchicalTracker> make_tracker(const WorkcellConfig& c, std::uint64_t seed) {
    if (c.variant == Variant::Cooperation) return std::nullopt;
    auto tc = c.tracker;
    tc.high_enabled = c.variant == Variant::Hit;
    return prediction::HierarchicalTracker(tc, c.workspace.goal_regions(), split_seed(seed, kTrackerStream));
  }

  void emit(std::string tag, int part = 0) { events_.push_back({std::move(tag), part}); }

  PartState& state(int p) { return parts_.at(static_cast<std::size_t>(p - 1)); }

  void detect_alignment(const Vec2& wrist) {
    for (int p = 1; p <= 4; ++p) {
      auto& dwell = inside_[static_cast<std::size_t>(p - 1)];
      if (!cfg_.workspace.part(p).contains(wrist)) {
        dwell = 0.0;
        continue;
      }
      dwell += cfg_.dt;
      if (dwell < cfg_.align_detect - 1e-9) continue;
      auto& s = state(p);
      auto& re = realigned_[static_cast<std::size_t>(p - 1)];
      if (s == PartState::Unaligned) {
        s = PartState::Aligned;
        emit("aligned", p);
      } else if (s == PartState::PushedFailed && !re) {
        // A failed part stays failed until a recovery push seats it.
        re = true;
        emit("realigned", p);
      }
    }
  }

  Vec2 draw_offset(int part) {
    const Vec2 o = sample_push_offset(cfg_.robot.push.noise, push_rng_);
    if (forced_fail_ == part) return Vec2::Constant(cfg_.robot.push.noise * 0.75);
    return o;
  }

  Vec2 goal_point() const {
    return target_ ? Vec2(cfg_.workspace.push_point(*target_) + offset_) : cfg_.robot.home;
  }

  void enter_co() {
    emit("mode_co");
    arrived_ = false;
    push_timer_ = 0.0;
    co_elapsed_ = 0.0;
    admittance_active_ = false;
  }

  void leave_co(const char* why) {
    mode_.mode = Mode::CE;
    mode_.co_since.reset();
    emit(why);
    emit("mode_ce");
  }

  // Returns true when the robot must stay still this tick.
  bool coexist(const Vec2& wrist_hat, Vec2& v_cmd) {
    if (push_timer_ > 0.0) {
      push_timer_ = std::max(0.0, push_timer_ - cfg_.dt);
      if (push_timer_ < 1e-9) push_timer_ = 0.0;
      return true;
    }
    if (!target_ && !queues_.ready.empty()) {
      target_ = queues_.ready.front();
      auto& injected = cfg_.injected_failures;
      auto it = std::find(injected.begin(), injected.end(), *target_);
      forced_fail_.reset();
      if (it != injected.end()) {
        forced_fail_ = *target_;
        injected.erase(it);
      }
      offset_ = draw_offset(*target_);
      arrived_ = false;
      emit("target", *target_);
    }
    if (target_ && arrived_ && !hold_) {
      execute_push();
      return true;
    }
    v_cmd = apf_velocity(ee_, goal_point(), wrist_hat, ApfMode::Coexistence, cfg_.robot.apf, cfg_.robot.ce_speed,
                         cfg_.dt);
    return false;
  }

  void execute_push() {
    const int p = *target_;
    bool ok = push_action(queues_, p, offset_, cfg_.robot.push.tol) == PushOutcome::Ok;
    if (forced_fail_ == p || state(p) != PartState::Aligned) ok = false;
    state(p) = ok ? PartState::PushedOk : PartState::PushedFailed;
    queues_.mark_done(p);
    emit(ok ? "push_ok" : "push_failed", p);
    target_.reset();
    forced_fail_.reset();
    arrived_ = false;
    push_timer_ = cfg_.robot.push.duration;
    maybe_shake(p);
  }

  void maybe_shake(int pushed) {
    if (!(cfg_.shake_prob > 0.0)) return;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(push_rng_) >= cfg_.shake_prob) return;
    std::vector<int> victims;
    for (int p = 1; p <= 4; ++p)
      if (p != pushed && state(p) == PartState::Aligned) victims.push_back(p);
    if (victims.empty()) return;
    std::uniform_int_distribution<std::size_t> pick(0, victims.size() - 1);
    const int v = victims[pick(push_rng_)];
    state(v) = PartState::Unaligned;
    emit("shake", v);
  }

  bool cooperate(const TickInput& in, const Vec2& wrist_hat, Vec2& v_cmd) {
    const auto& rp = cfg_.robot;
    if (push_timer_ > 0.0) {
      push_timer_ = std::max(0.0, push_timer_ - cfg_.dt);
      if (push_timer_ < 1e-9) push_timer_ = 0.0;
      return true;
    }
    if (!admittance_active_) {
      if (contact_) {
        admittance_active_ = true;
        adm_ = {};
        emit("contact");
      } else if (cfg_.variant == Variant::Cooperation) {
        return true;
      } else {
        co_elapsed_ += cfg_.dt;
        if (co_elapsed_ > rp.contact_timeout) {
          leave_co("co_timeout");
          return true;
        }
        v_cmd = apf_velocity(ee_, wrist_hat, wrist_hat, ApfMode::CooperationApproach, rp.apf, rp.ce_speed, cfg_.dt);
        return false;
      }
    }
    const Vec2 pull = contact_ ? in.pull : Vec2::Zero();
    const auto out = admittance_step(adm_, Mode::CO, pull, cfg_.dt, rp.admittance);
    v_cmd = out.velocity;
    if (out.guidance_ended) {
      admittance_active_ = false;
      emit("guidance_end");
      recovery_push();
      if (cfg_.variant == Variant::Hit) {
        mode_ = mode_switch(mode_, tracker_->high(), t_, true, cfg_.mode);
        emit("mode_ce");
      }
      return true;
    }
    return false;
  }

  // Push at the guided pose, no goal noise.
  void recovery_push() {
    int best = 0;
    double best_d = cfg_.robot.recover_radius;
    for (int p = 1; p <= 4; ++p) {
      if (state(p) == PartState::PushedOk) continue;
      const double d = (ee_ - cfg_.workspace.push_point(p)).norm();
      if (d <= best_d) {
        best_d = d;
        best = p;
      }
    }
    if (best == 0) {
      emit("recover_none");
      return;
    }
    const auto b = static_cast<std::size_t>(best - 1);
    const bool seated = state(best) == PartState::Aligned || (state(best) == PartState::PushedFailed && realigned_[b]);
    const bool ok = seated && best_d <= cfg_.robot.push.tol;
    realigned_[b] = false;
    state(best) = ok ? PartState::PushedOk : PartState::PushedFailed;
    queues_.mark_done(best);
    if (target_ == best) {
      target_.reset();
      arrived_ = false;
      hold_ = false;
    }
    emit(ok ? "recover_ok" : "recover_failed", best);
    push_timer_ = cfg_.robot.push.duration;
  }

  // Removes any velocity component that would bring the end-effector inside
  // r_min of the estimated wrist.
  Vec2 keep_clear(const Vec2& v, const Vec2& wrist_hat, double dt) const {
    const Vec2 d = ee_ - wrist_hat;
    const double r = d.norm();
    const double r_min = cfg_.robot.apf.r_min;
    if (r < 1e-9) return v;
    const Vec2 n = d / r;
    const Vec2 next = ee_ + v * dt - wrist_hat;
    if (next.norm() >= r_min + 0.005) return v;
    const double inward = v.dot(n);
    return inward < 0.0 ? Vec2(v - inward * n) : v;
  }

  WorkcellConfig cfg_;
  std::optional<prediction::HierarchicalTracker> tracker_;
  std::mt19937_64 push_rng_;
  KalmanState kf_;
  std::optional<Vec2> smooth_;
  prediction::HierarchicalTracker::TickResult last_{};
  TaskQueues queues_;
  ModeState mode_;
  std::array<PartState, 4> parts_{};
  std::array<double, 4> inside_{};
  std::array<bool, 4> realigned_{};
  std::vector<int> seen_ongoing_, seen_ready_;
  std::vector<CellEvent> events_;

  Vec2 ee_;
  Vec2 vel_ = Vec2::Zero();
  double path_ = 0.0;
  std::int64_t tick_ = 0;
  double t_ = 0.0;

  std::optional<int> target_;
  std::optional<int> forced_fail_;
  Vec2 offset_ = Vec2::Zero();
  bool arrived_ = false;
  bool hold_ = false;
  double push_timer_ = 0.0;

  bool contact_ = false;
  bool admittance_active_ = false;
  AdmittanceState adm_{};
  double co_elapsed_ = 0.0;
};

}  // namespace hit::sim
