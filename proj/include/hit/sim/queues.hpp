#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "hit/core/error.hpp"
#include "hit/core/filter.hpp"
#include "hit/core/intention.hpp"
#include "hit/sim/control.hpp"

namespace hit::sim {

struct QueueThresholds {
  double enter_prob = 0.80;  ///< MAP probability that marks a part as being aligned
  double enter_hold = 1.5;   ///< seconds it must persist
  double exit_prob = 0.25;   ///< below this the alignment is considered finished
};

/// Robot-side bookkeeping of parts 1-4. Each part sits in exactly one of
/// task_set, ongoing, ready, done.
struct TaskQueues {
  std::vector<int> task_set{1, 2, 3, 4};
  std::deque<int> ongoing;
  std::deque<int> ready;
  std::vector<int> done;

  std::optional<int> candidate;  ///< part whose probability is being held
  double candidate_since = 0.0;

  bool in_task_set(int p) const { return std::find(task_set.begin(), task_set.end(), p) != task_set.end(); }
  bool in_ready(int p) const { return std::find(ready.begin(), ready.end(), p) != ready.end(); }
  bool in_ongoing(int p) const { return std::find(ongoing.begin(), ongoing.end(), p) != ongoing.end(); }
  bool is_done(int p) const { return std::find(done.begin(), done.end(), p) != done.end(); }

  /// Removes a part from whichever collection holds it and marks it done.
  void mark_done(int p) {
    std::erase(task_set, p);
    std::erase(ongoing, p);
    std::erase(ready, p);
    if (!is_done(p)) done.push_back(p);
    if (candidate == p) candidate.reset();
  }

  /// Multiset union equals {1,2,3,4}.
  bool conserved() const {
    std::vector<int> all(task_set.begin(), task_set.end());
    all.insert(all.end(), ongoing.begin(), ongoing.end());
    all.insert(all.end(), ready.begin(), ready.end());
    all.insert(all.end(), done.begin(), done.end());
    std::sort(all.begin(), all.end());
    return all == std::vector<int>{1, 2, 3, 4};
  }
};

/// task_set -> ongoing when the MAP part holds P > enter_prob for enter_hold
/// seconds; ongoing -> ready when its probability falls below exit_prob.
inline TaskQueues queue_update(TaskQueues q, const core::Posterior& low, double t, const QueueThresholds& th = {}) {
  const auto& space = low.space();
  const auto best = core::map_index(low.probs());
  const auto best_part = core::part_number(space.label(best));

  if (best_part && q.in_task_set(*best_part) && low[best] > th.enter_prob) {
    if (q.candidate != best_part) {
      q.candidate = best_part;
      q.candidate_since = t;
    }
    if (t - q.candidate_since >= th.enter_hold - 1e-9) {
      std::erase(q.task_set, *best_part);
      q.ongoing.push_back(*best_part);
      q.candidate.reset();
    }
  } else {
    q.candidate.reset();
  }

  for (auto it = q.ongoing.begin(); it != q.ongoing.end();) {
    const auto idx = space.index_of(core::part_label(*it));
    if (idx && low[*idx] < th.exit_prob) {
      q.ready.push_back(*it);
      it = q.ongoing.erase(it);
    } else {
      ++it;
    }
  }
  return q;
}

struct ModeThresholds {
  double co_prob = 0.90;  ///< strict: P(CO) must exceed this
  double co_hold = 0.5;
};

struct ModeState {
  Mode mode = Mode::CE;
  std::optional<double> co_since;
};

/// CE -> CO after P(CO) > co_prob for co_hold seconds; CO -> CE only when
/// guidance ends.
inline ModeState mode_switch(ModeState s, const core::Posterior& high, double t, bool guidance_ended = false,
                             const ModeThresholds& th = {}) {
  const auto co = high.space().index_of(core::Label::CO);
  if (!co) throw InvalidParameter("mode_switch needs a posterior over {CE, CO}");
  if (s.mode == Mode::CO) {
    if (guidance_ended) {
      s.mode = Mode::CE;
      s.co_since.reset();
    }
    return s;
  }
  if (high[*co] > th.co_prob) {
    if (!s.co_since) s.co_since = t;
    if (t - *s.co_since >= th.co_hold - 1e-9) {
      s.mode = Mode::CO;
      s.co_since.reset();
    }
  } else {
    s.co_since.reset();
  }
  return s;
}

/// Decides a push on part `part` from a goal offset. The part must be ready.
inline PushOutcome push_action(const TaskQueues& q, int part, const Vec2& offset, double tol) {
  if (!q.in_ready(part)) throw InvalidParameter("push on a part that is not in the ready queue");
  return push_outcome(offset, tol);
}

template <class Rng>
PushOutcome push_action(const TaskQueues& q, int part, Rng& rng, const PushParams& p) {
  if (!q.in_ready(part)) throw InvalidParameter("push on a part that is not in the ready queue");
  return push_outcome(sample_push_offset(p.noise, rng), p.tol);
}

}  // namespace hit::sim
