#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hit/core/error.hpp"
#include "hit/sim/world.hpp"

namespace hit::harness {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Invalid configuration; `path()` names the offending field ("robot.apf.r_min").
class ConfigError : public InvalidParameter {
 public:
  ConfigError(std::string path, const std::string& what)
      : InvalidParameter(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Everything one trial needs.
struct ScenarioConfig {
  std::string name = "default";
  std::uint64_t seed = 0;
  sim::WorldConfig world{};

  sim::Variant variant() const { return world.cell.variant; }
};

inline sim::Variant variant_from_string(const std::string& s) {
  if (s == "hit") return sim::Variant::Hit;
  if (s == "coex") return sim::Variant::Coexistence;
  if (s == "coop") return sim::Variant::Cooperation;
  throw InvalidParameter("unknown variant '" + s + "' (expected coex, coop or hit)");
}

namespace detail {

// Walks every field once; the reader and the writer share this layout so
// each constant appears in exactly one place.
template <class V>
void visit_config(V& v, ScenarioConfig& c) {
  auto& w = c.world;
  auto& cell = w.cell;
  auto& tr = cell.tracker;
  v.field("name", c.name);
  v.field("seed", c.seed);
  v.variant("variant", cell.variant);
  v.field("dt", cell.dt);
  v.field("max_time", w.max_time);
  v.object("workspace", [&] {
    v.rect_array("parts", cell.workspace.parts);
    v.rect("prep", cell.workspace.prep);
    v.rect("table", cell.workspace.table);
  });
  v.object("tracker", [&] {
    v.field("particles", tr.particles);
    v.field("ess_fraction", tr.ess_fraction);
    v.object("low", [&] {
      v.field("tp", tr.low.tp);
      v.field("alpha", tr.low.alpha);
      v.field("speed_window", tr.low_gilm.speed_window);
      v.isotropic("process_noise_std", tr.low_gilm.process_noise_cov);
      v.field("goal_backprop", tr.low_gilm.goal_backprop);
    });
    v.object("high", [&] {
      v.field("tp", tr.high.tp);
      v.field("alpha", tr.high.alpha);
      v.isotropic("fr_std", tr.high.fr_cov);
      v.field("speed_window", tr.high_gilm.speed_window);
      v.isotropic("process_noise_std", tr.high_gilm.process_noise_cov);
      v.field("goal_backprop", tr.high_gilm.goal_backprop);
    });
  });
  v.object("kalman", [&] {
    v.field("accel_std", cell.kalman.accel_std);
    v.field("meas_std", cell.kalman.meas_std);
    v.field("init_vel_std", cell.kalman.init_vel_std);
  });
  v.object("queues", [&] {
    v.field("enter_prob", cell.queues.enter_prob);
    v.field("enter_hold", cell.queues.enter_hold);
    v.field("exit_prob", cell.queues.exit_prob);
  });
  v.object("mode", [&] {
    v.field("co_prob", cell.mode.co_prob);
    v.field("co_hold", cell.mode.co_hold);
  });
  v.object("robot", [&] {
    auto& r = cell.robot;
    v.vec2("home", r.home);
    v.field("ce_speed", r.ce_speed);
    v.field("smoothing", r.smoothing);
    v.field("recover_radius", r.recover_radius);
    v.field("contact_timeout", r.contact_timeout);
    v.field("home_tol", r.home_tol);
    v.object("apf", [&] {
      v.field("goal_speed", r.apf.goal_speed);
      v.field("human_gain", r.apf.human_gain);
      v.field("r_min", r.apf.r_min);
      v.field("r_max", r.apf.r_max);
    });
    v.object("admittance", [&] {
      v.field("damping", r.admittance.damping);
      v.field("pull_threshold", r.admittance.pull_threshold);
      v.field("release_time", r.admittance.release_time);
      v.field("guided_speed", r.admittance.speed_limit);
      v.field("contact_radius", r.admittance.contact_radius);
    });
    v.object("push", [&] {
      v.field("noise", r.push.noise);
      v.field("tol", r.push.tol);
      v.field("arrive_tol", r.push.arrive_tol);
      v.field("duration", r.push.duration);
    });
  });
  v.object("assembly", [&] {
    v.field("inject_failures", cell.injected_failures);
    v.field("align_detect", cell.align_detect);
    v.field("shake_prob", cell.shake_prob);
  });
  v.object("human", [&] {
    auto& h = w.human;
    v.field("order", h.order);
    v.script("script", h.script);
    v.field("prep_dwell_min", h.prep_dwell_min);
    v.field("prep_dwell_max", h.prep_dwell_max);
    v.field("align_dwell_min", h.align_dwell_min);
    v.field("align_dwell_max", h.align_dwell_max);
    v.field("realign_dwell", h.realign_dwell);
    v.field("readjust_dwell", h.readjust_dwell);
    v.field("readjust_prob", h.readjust_prob);
    v.field("max_readjust", h.max_readjust);
    v.field("visible_offset", h.visible_offset);
    v.field("nudge_after", h.nudge_after);
    v.field("max_nudges", h.max_nudges);
    v.object("motion", [&] {
      auto& m = h.motion;
      v.field("cruise", m.cruise);
      v.field("approach_gain", m.approach_gain);
      v.field("noise_std", m.noise_std);
      v.field("aim_std", m.aim_std);
      v.field("clearance", m.clearance);
      v.field("standoff", m.standoff);
      v.field("pull_gain", m.pull_gain);
      v.field("pull_min", m.pull_min);
      v.field("pull_max", m.pull_max);
      v.field("deadband", m.deadband);
      v.field("reach", m.reach);
    });
    v.object("observe", [&] {
      v.field("noise_std", h.observe.noise_std);
      v.field("p_drop", h.observe.p_drop);
    });
  });
}

class Writer {
 public:
  json out = json::object();

  template <class T>
  void field(const char* k, const T& x) { cur()[k] = x; }
  void variant(const char* k, sim::Variant x) { cur()[k] = sim::to_string(x); }
  void vec2(const char* k, const Vec2& x) { cur()[k] = {x.x(), x.y()}; }
  void isotropic(const char* k, const Mat2& m) { cur()[k] = std::sqrt(m(0, 0)); }
  void rect(const char* k, const sim::Rect& r) { cur()[k] = rect_json(r); }
  void script(const char* k, const std::vector<sim::ScheduleItem>& s) {
    json arr = json::array();
    for (const auto& it : s) {
      json e = {{"kind", sim::to_string(it.kind)}, {"part", it.part}};
      if (it.kind != sim::ItemKind::Guide) e["dwell"] = it.dwell;
      arr.push_back(e);
    }
    cur()[k] = arr;
  }
  void rect_array(const char* k, const std::array<sim::Rect, 4>& a) {
    json arr = json::array();
    for (const auto& r : a) arr.push_back(rect_json(r));
    cur()[k] = arr;
  }
  template <class F>
  void object(const char* k, F&& f) {
    stack_.push_back(&cur()[k]);
    *stack_.back() = json::object();
    f();
    stack_.pop_back();
  }

 private:
  static json rect_json(const sim::Rect& r) {
    return {{"center", {r.center.x(), r.center.y()}}, {"size", {r.size.x(), r.size.y()}}};
  }
  json& cur() { return stack_.empty() ? out : *stack_.back(); }
  std::vector<json*> stack_;
};

class Reader {
 public:
  explicit Reader(const json& root) { frames_.push_back({&root, "", {}}); }

  template <class T>
  void field(const char* k, T& x) {
    const json* j = take(k);
    if (!j) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!j->is_number()) throw ConfigError(path(k), "expected a number");
      } else if constexpr (std::is_same_v<T, bool>) {
        if (!j->is_boolean()) throw ConfigError(path(k), "expected true or false");
      } else if constexpr (std::is_integral_v<T>) {
        if (!j->is_number_integer()) throw ConfigError(path(k), "expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (j->is_number_integer() && !j->is_number_unsigned() && j->get<long long>() < 0)
            throw ConfigError(path(k), "expected a nonnegative integer");
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!j->is_string()) throw ConfigError(path(k), "expected a string");
      } else {
        if (!j->is_array()) throw ConfigError(path(k), "expected an array");
      }
      x = j->get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path(k), e.what());
    }
  }
  void variant(const char* k, sim::Variant& x) {
    std::string s = sim::to_string(x);
    field(k, s);
    try {
      x = variant_from_string(s);
    } catch (const InvalidParameter& e) {
      throw ConfigError(path(k), e.what());
    }
  }
  void vec2(const char* k, Vec2& x) {
    const json* j = take(k);
    if (j) x = read_vec2(*j, path(k));
  }
  void isotropic(const char* k, Mat2& m) {
    double s = std::sqrt(m(0, 0));
    field(k, s);
    if (!(s >= 0.0)) throw ConfigError(path(k), "must be >= 0");
    m = Mat2::Identity() * s * s;
  }
  void rect(const char* k, sim::Rect& r) {
    const json* j = take(k);
    if (j) r = read_rect(*j, path(k));
  }
  void script(const char* k, std::vector<sim::ScheduleItem>& s) {
    const json* j = take(k);
    if (!j) return;
    if (!j->is_array()) throw ConfigError(path(k), "expected an array of schedule items");
    s.clear();
    for (std::size_t i = 0; i < j->size(); ++i) {
      const auto& e = (*j)[i];
      const std::string p = path(k) + "[" + std::to_string(i) + "]";
      if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string()) throw ConfigError(p, "expected {kind, part, dwell}");
      sim::ScheduleItem it;
      const auto kind = e["kind"].get<std::string>();
      if (kind == "prep") it.kind = sim::ItemKind::Prep;
      else if (kind == "align") it.kind = sim::ItemKind::Align;
      else if (kind == "readjust") it.kind = sim::ItemKind::Readjust;
      else if (kind == "guide") it.kind = sim::ItemKind::Guide;
      else throw ConfigError(p + ".kind", "expected prep, align, readjust or guide");
      for (auto f = e.begin(); f != e.end(); ++f) {
        if (f.key() == "part") {
          if (!f->is_number_integer()) throw ConfigError(p + ".part", "expected an integer");
          it.part = f->get<int>();
        } else if (f.key() == "dwell") {
          if (!f->is_number()) throw ConfigError(p + ".dwell", "expected a number");
          it.dwell = f->get<double>();
        } else if (f.key() != "kind") {
          throw ConfigError(p + "." + f.key(), "unknown field");
        }
      }
      s.push_back(it);
    }
  }
  void rect_array(const char* k, std::array<sim::Rect, 4>& a) {
    const json* j = take(k);
    if (!j) return;
    if (!j->is_array() || j->size() != 4) throw ConfigError(path(k), "expected an array of 4 regions");
    for (std::size_t i = 0; i < 4; ++i) a[i] = read_rect((*j)[i], path(k) + "[" + std::to_string(i) + "]");
  }
  template <class F>
  void object(const char* k, F&& f) {
    const json* j = take(k);
    if (!j) return;
    if (!j->is_object()) throw ConfigError(path(k), "expected an object");
    frames_.push_back({j, path(k), {}});
    f();
    finish_frame();
    frames_.pop_back();
  }

  /// Rejects keys that no field consumed.
  void finish_frame() {
    const auto& f = frames_.back();
    for (auto it = f.j->begin(); it != f.j->end(); ++it)
      if (!f.used.count(it.key()) && it.key() != "schema_version")
        throw ConfigError(f.prefix.empty() ? it.key() : f.prefix + "." + it.key(), "unknown field");
  }

 private:
  struct Frame {
    const json* j;
    std::string prefix;
    std::set<std::string> used;
  };

  std::string path(const char* k) const {
    const auto& p = frames_.back().prefix;
    return p.empty() ? std::string(k) : p + "." + k;
  }
  const json* take(const char* k) {
    auto& f = frames_.back();
    f.used.insert(k);
    auto it = f.j->find(k);
    return it == f.j->end() ? nullptr : &*it;
  }
  static Vec2 read_vec2(const json& j, const std::string& p) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      throw ConfigError(p, "expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
  }
  static sim::Rect read_rect(const json& j, const std::string& p) {
    if (!j.is_object() || !j.contains("center") || !j.contains("size"))
      throw ConfigError(p, "expected {center: [x, y], size: [w, h]}");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "center" && it.key() != "size") throw ConfigError(p + "." + it.key(), "unknown field");
    return {read_vec2(j["center"], p + ".center"), read_vec2(j["size"], p + ".size")};
  }

  std::vector<Frame> frames_;
};

template <class F>
void check(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace detail

/// Field-level validation beyond types; errors name the field path.
inline void validate(const ScenarioConfig& c) {
  const auto& w = c.world;
  const auto& cell = w.cell;
  const auto& tr = cell.tracker;
  using detail::check;
  if (!(cell.dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(w.max_time > 0.0)) throw ConfigError("max_time", "must be > 0");
  check("workspace", [&] { cell.workspace.validate(); });
  check("tracker.low", [&] { prediction::FilterConfig{tr.low.tp, cell.dt, tr.low.alpha}.validate(); });
  check("tracker.low", [&] { tr.low_gilm.validate(); });
  check("tracker.high", [&] { tr.high_gilm.validate(); });
  if (tr.particles < 1) throw ConfigError("tracker.particles", "must be >= 1");
  if (!(tr.ess_fraction >= 0.0 && tr.ess_fraction <= 1.0)) throw ConfigError("tracker.ess_fraction", "must lie in [0, 1]");
  if (tr.high.tp < 1) throw ConfigError("tracker.high.tp", "must be >= 1");
  if (!(tr.high.alpha >= 0.0 && tr.high.alpha <= 1.0)) throw ConfigError("tracker.high.alpha", "must lie in [0, 1]");
  if (!(cell.kalman.accel_std > 0.0 && cell.kalman.meas_std > 0.0)) throw ConfigError("kalman", "noise must be > 0");
  const auto& q = cell.queues;
  if (!(q.enter_prob > q.exit_prob && q.enter_prob < 1.0 && q.exit_prob > 0.0))
    throw ConfigError("queues", "need 0 < exit_prob < enter_prob < 1");
  if (!(q.enter_hold >= 0.0)) throw ConfigError("queues.enter_hold", "must be >= 0");
  if (!(cell.mode.co_prob > 0.0 && cell.mode.co_prob < 1.0)) throw ConfigError("mode.co_prob", "must lie in (0, 1)");
  check("robot", [&] { cell.robot.validate(); });
  for (int p : cell.injected_failures)
    if (p < 1 || p > 4) throw ConfigError("assembly.inject_failures", "parts are numbered 1..4");
  if (!(cell.shake_prob >= 0.0 && cell.shake_prob <= 1.0)) throw ConfigError("assembly.shake_prob", "must lie in [0, 1]");
  if (!(cell.align_detect > 0.0)) throw ConfigError("assembly.align_detect", "must be > 0");
  check("human", [&] { w.human.validate(); });
  if (!(w.human.observe.noise_std >= 0.0)) throw ConfigError("human.observe.noise_std", "must be >= 0");
  if (!(w.human.observe.p_drop >= 0.0 && w.human.observe.p_drop <= 1.0))
    throw ConfigError("human.observe.p_drop", "must lie in [0, 1]");
}

/// Overlays a JSON document onto `base`; absent fields keep their values.
inline ScenarioConfig config_from_json(const json& j, ScenarioConfig base = {}) {
  if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
  if (j.contains("schema_version")) {
    const auto& v = j["schema_version"];
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
      throw ConfigError("schema_version", "unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  detail::Reader r(j);
  detail::visit_config(r, base);
  r.finish_frame();
  validate(base);
  return base;
}

inline json config_to_json(const ScenarioConfig& c) {
  detail::Writer w;
  auto copy = c;
  detail::visit_config(w, copy);
  json out = json::object();
  out["schema_version"] = kSchemaVersion;
  out.update(w.out);
  return out;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace hit::harness
