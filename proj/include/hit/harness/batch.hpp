#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hit/harness/metrics.hpp"
#include "hit/harness/trial.hpp"

namespace hit::harness {

struct TrialResult {
  std::uint64_t seed = 0;
  Metrics metrics;
};

/// Runs `cfg` once per seed; trials run in parallel, results come back in seed order.
/// `sink`, if given, receives each finished log (called under a lock).
inline std::vector<TrialResult> run_seeds(const ScenarioConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                          unsigned threads = 0,
                                          const std::function<void(const TrialLog&)>& sink = {}) {
  validate(cfg);
  std::vector<TrialResult> out(seeds.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, seeds.size())));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr err;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < seeds.size();) {
      try {
        auto c = cfg;
        c.seed = seeds[i];
        const auto log = run_trial(c);
        out[i] = {seeds[i], compute_metrics(log)};
        if (sink) {
          std::lock_guard lk(mu);
          sink(log);
        }
      } catch (...) {
        std::lock_guard lk(mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {"variant",          "seed",         "completion_time", "automated_path",
                                                "guided_path",      "human_force",  "human_energy",    "n_failures",
                                                "low_frame_acc",    "high_frame_acc", "completed"};
  return cols;
}

namespace detail {

inline std::string cell(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os << std::setprecision(17) << *v;
  return os.str();
}

}  // namespace detail

inline void write_csv_header(std::ostream& os) {
  const auto& c = csv_columns();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << '\n';
}

/// Table column order; absent values are empty cells.
inline void write_csv_row(std::ostream& os, const TrialResult& r) {
  const auto& m = r.metrics;
  os << sim::to_string(m.variant) << ',' << r.seed << ',' << detail::cell(m.completion_time) << ','
     << detail::cell(m.automated_path) << ',' << detail::cell(m.guided_path) << ',' << detail::cell(m.mean_human_force)
     << ',' << detail::cell(m.human_energy) << ',' << m.n_failures << ',' << detail::cell(m.low_frame_acc) << ','
     << detail::cell(m.high_frame_acc) << ',' << (m.completed ? 1 : 0) << '\n';
}

/// Mean, sample std and median of one column over the trials where it is present.
struct Stat {
  std::size_t n = 0;
  double mean = 0.0, std = 0.0, median = 0.0;
};

inline Stat stat(std::vector<double> v) {
  Stat s;
  s.n = v.size();
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  s.median = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  return s;
}

struct VariantSummary {
  sim::Variant variant = sim::Variant::Hit;
  std::size_t trials = 0, completed = 0;
  Stat completion_time, automated_path, guided_path, human_force, human_energy, n_failures, low_acc, high_acc;
};

inline VariantSummary summarize(sim::Variant v, const std::vector<TrialResult>& rs) {
  VariantSummary s;
  s.variant = v;
  std::vector<double> ct, ap, gp, hf, he, nf, la, ha;
  auto add = [](std::vector<double>& dst, const std::optional<double>& x) {
    if (x) dst.push_back(*x);
  };
  for (const auto& r : rs) {
    if (r.metrics.variant != v) continue;
    ++s.trials;
    s.completed += r.metrics.completed;
    const auto& m = r.metrics;
    ct.push_back(m.completion_time);
    add(ap, m.automated_path);
    add(gp, m.guided_path);
    add(hf, m.mean_human_force);
    add(he, m.human_energy);
    nf.push_back(m.n_failures);
    add(la, m.low_frame_acc);
    add(ha, m.high_frame_acc);
  }
  s.completion_time = stat(ct);
  s.automated_path = stat(ap);
  s.guided_path = stat(gp);
  s.human_force = stat(hf);
  s.human_energy = stat(he);
  s.n_failures = stat(nf);
  s.low_acc = stat(la);
  s.high_acc = stat(ha);
  return s;
}

inline json summary_json(const VariantSummary& s) {
  auto st = [](const Stat& x) -> json {
    if (!x.n) return nullptr;
    return {{"n", x.n}, {"mean", x.mean}, {"std", x.std}, {"median", x.median}};
  };
  return {{"variant", sim::to_string(s.variant)},
          {"trials", s.trials},
          {"completed", s.completed},
          {"completion_time", st(s.completion_time)},
          {"automated_path", st(s.automated_path)},
          {"guided_path", st(s.guided_path)},
          {"human_force", st(s.human_force)},
          {"human_energy", st(s.human_energy)},
          {"n_failures", st(s.n_failures)},
          {"low_frame_acc", st(s.low_acc)},
          {"high_frame_acc", st(s.high_acc)}};
}

/// Plain-text table, mean ± std per variant.
inline void print_summary(std::ostream& os, const std::vector<VariantSummary>& rows) {
  auto f = [](const Stat& s, int prec) {
    if (!s.n) return std::string("N/A");
    std::ostringstream o;
    o << std::fixed << std::setprecision(prec) << s.mean << " ± " << s.std;
    return o.str();
  };
  os << std::left << std::setw(6) << "var" << std::setw(18) << "time (s)" << std::setw(18) << "auto path (m)"
     << std::setw(18) << "guided path (m)" << std::setw(18) << "force" << std::setw(20) << "energy" << std::setw(16)
     << "failures" << std::setw(18) << "low acc" << std::setw(18) << "high acc" << "done\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(6) << sim::to_string(r.variant) << std::setw(18) << f(r.completion_time, 1)
       << std::setw(18) << f(r.automated_path, 2) << std::setw(18) << f(r.guided_path, 2) << std::setw(18)
       << f(r.human_force, 2) << std::setw(20) << f(r.human_energy, 2) << std::setw(16) << f(r.n_failures, 2)
       << std::setw(18) << f(r.low_acc, 3) << std::setw(18) << f(r.high_acc, 3) << r.completed << "/" << r.trials
       << '\n';
  }
}

/// Parses "a..b" (inclusive) or a single seed.
inline std::vector<std::uint64_t> parse_seed_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const auto v = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return {v};
    }
    const auto a_str = s.substr(0, dots), b_str = s.substr(dots + 2);
    const auto a = std::stoull(a_str, &used);
    if (used != a_str.size()) throw std::invalid_argument(s);
    const auto b = std::stoull(b_str, &used);
    if (used != b_str.size() || b < a) throw std::invalid_argument(s);
    std::vector<std::uint64_t> out;
    for (auto i = a; i <= b; ++i) out.push_back(i);
    return out;
  } catch (const std::logic_error&) {
    throw InvalidParameter("bad seed range '" + s + "' (expected a..b)");
  }
}

}  // namespace hit::harness
