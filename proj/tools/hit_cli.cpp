// hit: batch trials, benchmarks, live sessions and log analysis.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hit/harness/batch.hpp"
#include "hit/harness/config.hpp"
#include "hit/harness/metrics.hpp"
#include "hit/harness/scenarios.hpp"
#include "hit/harness/server.hpp"
#include "hit/harness/trial.hpp"

namespace fs = std::filesystem;
using namespace hit;
using namespace hit::harness;

namespace {

std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }

std::string opt_str(const std::optional<double>& v, int prec = 4) {
  if (!v) return "N/A";
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << *v;
  return os.str();
}

std::vector<sim::Variant> parse_variants(const std::string& s) {
  std::vector<sim::Variant> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');)
    if (!tok.empty()) out.push_back(variant_from_string(tok));
  if (out.empty()) throw InvalidParameter("no variants given");
  return out;
}

int cmd_run(const std::string& config, const std::string& seeds, const std::string& out_dir, unsigned threads) {
  const auto cfg = load_config(config);
  const auto seed_list = parse_seed_range(seeds);
  fs::create_directories(out_dir);
  const auto results = run_seeds(cfg, seed_list, threads, [&](const TrialLog& log) {
    std::ofstream f(fs::path(out_dir) / ("trial_" + std::string(sim::to_string(log.variant)) + "_" +
                                         std::to_string(log.seed) + ".jsonl"));
    write_log(f, log);
  });
  {
    std::ofstream csv(fs::path(out_dir) / "metrics.csv");
    write_csv_header(csv);
    for (const auto& r : results) write_csv_row(csv, r);
  }
  const auto summary = summarize(cfg.variant(), results);
  std::ofstream(fs::path(out_dir) / "summary.json") << summary_json(summary).dump(2) << '\n';
  print_summary(std::cout, {summary});
  std::cout << "wrote " << results.size() << " trial logs, metrics.csv and summary.json to " << out_dir << '\n';
  return summary.completed == summary.trials ? 0 : 2;
}

int cmd_bench(const std::string& variants, int reps, const std::string& config, std::uint64_t seed0,
              const std::string& csv_path, unsigned threads) {
  const auto base = config.empty() ? ScenarioConfig{} : load_config(config);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < reps; ++i) seeds.push_back(seed0 + static_cast<std::uint64_t>(i));
  std::vector<VariantSummary> rows;
  std::vector<TrialResult> all;
  for (auto v : parse_variants(variants)) {
    auto cfg = base;
    cfg.world.cell.variant = v;
    auto rs = run_seeds(cfg, seeds, threads);
    rows.push_back(summarize(v, rs));
    all.insert(all.end(), rs.begin(), rs.end());
  }
  print_summary(std::cout, rows);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    write_csv_header(csv);
    for (const auto& r : all) write_csv_row(csv, r);
  }
  return 0;
}

int cmd_serve(int port, const std::string& config, int stale_ms, bool any_addr) {
  const auto cfg = config.empty() ? ScenarioConfig{} : load_config(config);
  ServerOptions opt;
  opt.port = port;
  opt.stale_ms = stale_ms;
  opt.loopback_only = !any_addr;
  opt.log = [](const std::string& s) { std::cerr << s << '\n'; };
  Server server(cfg, opt);
  const int bound = server.start();
  std::cout << "listening on port " << bound << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  std::cout << "served " << server.sessions_served() << " sessions\n";
  return 0;
}

int cmd_accuracy(const std::string& path) {
  const auto log = read_log_file(path);
  const auto acc = frame_accuracy(log);
  std::cout << "low  " << opt_str(acc.low) << "  (" << acc.low_frames << " frames)\n";
  std::cout << "high " << opt_str(acc.high) << "  (" << acc.high_frames << " frames)\n";
  if (log.ended) {
    const auto m = compute_metrics(log);
    std::cout << "completion_time " << opt_str(m.completion_time, 2) << (m.completed ? "" : " (time cap)") << '\n'
              << "automated_path  " << opt_str(m.automated_path) << '\n'
              << "guided_path     " << opt_str(m.guided_path) << '\n'
              << "human_force     " << opt_str(m.mean_human_force) << '\n'
              << "human_energy    " << opt_str(m.human_energy) << '\n'
              << "n_failures      " << m.n_failures << '\n';
  } else {
    std::cout << "log is truncated; metrics skipped\n";
  }
  return 0;
}

// Sweeps the FR region std on the approach scenario and reports the latency
// from approach onset to P(CO) > 0.9.
int cmd_tune_fr(const std::string& config, const std::vector<double>& grid, int seeds, double target) {
  auto base = config.empty() ? approach_scenario() : load_config(config);
  std::cout << std::left << std::setw(10) << "fr_std" << std::setw(12) << "median (s)" << std::setw(12) << "p90 (s)"
            << std::setw(12) << "within" << "missed\n";
  double best_std = grid.front(), best_med = 1e300;
  for (double s : grid) {
    auto cfg = base;
    cfg.world.cell.tracker.high.fr_cov = Mat2::Identity() * s * s;
    std::vector<double> lat;
    int missed = 0, within = 0;
    for (int i = 0; i < seeds; ++i) {
      cfg.seed = static_cast<std::uint64_t>(i);
      const auto r = run_approach(cfg);
      if (auto l = r.latency()) {
        lat.push_back(*l);
        within += *l <= target + 1e-9;
      } else {
        ++missed;
      }
    }
    std::sort(lat.begin(), lat.end());
    const auto st = stat(lat);
    const double p90 = lat.empty() ? 0.0 : lat[std::min(lat.size() - 1, lat.size() * 9 / 10)];
    std::cout << std::left << std::setw(10) << s << std::setw(12) << opt_str(lat.empty() ? std::nullopt : std::optional(st.median), 3)
              << std::setw(12) << opt_str(lat.empty() ? std::nullopt : std::optional(p90), 3) << std::setw(12)
              << (std::to_string(within) + "/" + std::to_string(seeds)) << missed << '\n';
    if (!lat.empty() && missed == 0 && st.median < best_med - 1e-9) {
      best_med = st.median;
      best_std = s;
    }
  }
  std::cout << "best fr_std " << best_std << " (median latency " << opt_str(best_med, 3) << " s, target " << target
            << " s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical intention tracking: simulation, evaluation and live sessions"};
  app.require_subcommand(1);

  std::string config, seeds = "0..9", out_dir = "out", variants = "coex,coop,hit", csv, log_path;
  int reps = 10, port = 8765, stale_ms = 1000, tune_seeds = 20;
  unsigned threads = 0;
  std::uint64_t seed0 = 0;
  bool any_addr = false;
  double target = 0.5;
  std::vector<double> grid = {0.01, 0.02, 0.03, 0.05, 0.08, 0.12};

  auto* run = app.add_subcommand("run", "run one scenario over a seed range");
  run->add_option("--config", config, "scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--seeds", seeds, "seed range a..b (inclusive)");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* bench = app.add_subcommand("bench", "compare variants over repeated seeds");
  bench->add_option("--variants", variants, "comma-separated: coex,coop,hit");
  bench->add_option("--reps", reps, "seeds per variant")->check(CLI::PositiveNumber);
  bench->add_option("--config", config, "base scenario JSON")->check(CLI::ExistingFile);
  bench->add_option("--seed0", seed0, "first seed");
  bench->add_option("--csv", csv, "write per-trial metrics here");
  bench->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* serve = app.add_subcommand("serve", "live session server");
  serve->add_option("--port", port, "TCP port (0: any free port)")->check(CLI::Range(0, 65535));
  serve->add_option("--config", config, "scenario JSON")->check(CLI::ExistingFile);
  serve->add_option("--stale-ms", stale_ms, "client silence that pauses the session")->check(CLI::PositiveNumber);
  serve->add_flag("--any-addr", any_addr, "listen on all interfaces instead of loopback");

  auto* acc = app.add_subcommand("accuracy", "frame-wise accuracy and metrics of a trial log");
  acc->add_option("--log", log_path, "trial log (.jsonl)")->required()->check(CLI::ExistingFile);

  auto* tune = app.add_subcommand("tune-fr", "sweep the FR region std on the approach scenario");
  tune->add_option("--config", config, "approach scenario JSON")->check(CLI::ExistingFile);
  tune->add_option("--grid", grid, "FR std values (m)")->check(CLI::PositiveNumber);
  tune->add_option("--seeds", tune_seeds, "seeds per value")->check(CLI::PositiveNumber);
  tune->add_option("--target", target, "latency target (s)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, seeds, out_dir, threads);
    if (*bench) return cmd_bench(variants, reps, config, seed0, csv, threads);
    if (*serve) return cmd_serve(port, config, stale_ms, any_addr);
    if (*acc) return cmd_accuracy(log_path);
    if (*tune) return cmd_tune_fr(config, grid, tune_seeds, target);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
