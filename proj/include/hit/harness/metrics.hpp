#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>

#include "hit/core/error.hpp"
#include "hit/harness/trial_log.hpp"

namespace hit::harness {

/// Per-trial evaluation. Absent fields do not apply to the variant.
struct Metrics {
  sim::Variant variant = sim::Variant::Hit;
  bool completed = false;
  double completion_time = 0.0;
  std::optional<double> automated_path;  ///< ee path driven by the coexistence module (m)
  std::optional<double> guided_path;     ///< ee path while cooperating (m)
  std::optional<double> mean_human_force;
  std::optional<double> human_energy;
  int n_failures = 0;                    ///< parts left pushed-failed at the end
  std::optional<double> low_frame_acc;
  std::optional<double> high_frame_acc;
  double total_path = 0.0;
};

struct FrameAccuracy {
  std::optional<double> low;   ///< absent with no scored frame
  std::optional<double> high;
  std::size_t low_frames = 0;
  std::size_t high_frames = 0;
};

/// Index of the largest entry, ties to the lowest index.
template <class A>
std::size_t argmax(const A& a) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] > a[best]) best = i;
  return best;
}

/// Fraction of frames whose MAP intention equals the ground truth.
/// Frames with blank ground truth, or no posterior at that level, are skipped.
inline FrameAccuracy frame_accuracy(const TrialLog& log) {
  static constexpr core::Label kLow[5] = {core::Label::Part1, core::Label::Part2, core::Label::Part3,
                                          core::Label::Part4, core::Label::Prep};
  static constexpr core::Label kHigh[2] = {core::Label::CE, core::Label::CO};
  FrameAccuracy out;
  std::size_t low_hits = 0, high_hits = 0;
  for (const auto& r : log.records) {
    if (r.gt_low && r.post1) {
      ++out.low_frames;
      if (kLow[argmax(*r.post1)] == *r.gt_low) ++low_hits;
    }
    if (r.gt_high && r.post2) {
      ++out.high_frames;
      if (kHigh[argmax(*r.post2)] == *r.gt_high) ++high_hits;
    }
  }
  if (out.low_frames) out.low = static_cast<double>(low_hits) / static_cast<double>(out.low_frames);
  if (out.high_frames) out.high = static_cast<double>(high_hits) / static_cast<double>(out.high_frames);
  return out;
}

/// Table-style metrics. Each ee segment is attributed to the mode logged on
/// the tick that produced it.
inline Metrics compute_metrics(const TrialLog& log) {
  if (!log.ended) throw InvalidParameter("truncated log: no end marker");
  Metrics m;
  m.variant = log.variant;
  m.completed = log.completed;
  m.completion_time = log.end_time;

  double ce = 0.0, co = 0.0, energy = 0.0, force = 0.0;
  std::size_t contact_ticks = 0;
  Vec2 prev = log.ee0;
  for (const auto& r : log.records) {
    const double seg = (r.ee - prev).norm();
    (r.mode == sim::Mode::CE ? ce : co) += seg;
    prev = r.ee;
    const double f = r.pull.norm();
    energy += f * r.ee_vel.norm() * log.dt;
    if (r.contact) {
      force += f;
      ++contact_ticks;
    }
  }
  m.total_path = ce + co;
  if (log.variant != sim::Variant::Cooperation) m.automated_path = ce;
  if (log.variant != sim::Variant::Coexistence) {
    m.guided_path = co;
    m.human_energy = energy;
    m.mean_human_force = contact_ticks ? force / static_cast<double>(contact_ticks) : 0.0;
  }
  if (!log.records.empty())
    for (auto p : log.records.back().parts) m.n_failures += p == sim::PartState::PushedFailed;

  const auto acc = frame_accuracy(log);
  m.low_frame_acc = acc.low;
  m.high_frame_acc = acc.high;
  return m;
}

}  // namespace hit::harness
