#pragma once

#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hit/core/error.hpp"
#include "hit/harness/config.hpp"
#include "hit/sim/world.hpp"

namespace hit::harness {

/// Per-trial event log: header, one record per tick, end marker.
struct TrialLog {
  sim::Variant variant = sim::Variant::Hit;
  std::uint64_t seed = 0;
  double dt = 1.0 / 30.0;
  Vec2 ee0 = Vec2::Zero();  ///< end-effector before the first tick
  std::vector<int> order;
  json config;              ///< echo of the scenario

  std::vector<sim::TickRecord> records;

  bool ended = false;       ///< end marker written
  bool completed = false;   ///< task finished before the time cap
  double end_time = 0.0;
};

namespace detail {

inline json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

inline Vec2 json_vec(const json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidParameter("expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline sim::PartState part_state_from_string(const std::string& s) {
  using sim::PartState;
  for (auto p : {PartState::Unaligned, PartState::Aligned, PartState::PushedOk, PartState::PushedFailed})
    if (s == sim::to_string(p)) return p;
  throw InvalidParameter("unknown part state '" + s + "'");
}

inline core::Label label_from_json(const json& j) {
  auto l = core::label_from_string(j.get<std::string>());
  if (!l) throw InvalidParameter("unknown label '" + j.get<std::string>() + "'");
  return *l;
}

}  // namespace detail

inline json record_to_json(const sim::TickRecord& r) {
  using detail::vec_json;
  json j;
  j["type"] = "tick";
  j["tick"] = r.tick;
  j["t"] = r.t;
  j["wrist"] = vec_json(r.wrist);
  j["raw"] = r.raw ? vec_json(*r.raw) : json(nullptr);
  j["smooth"] = r.smooth ? vec_json(*r.smooth) : json(nullptr);
  j["ee"] = vec_json(r.ee);
  j["ee_vel"] = vec_json(r.ee_vel);
  j["mode"] = sim::to_string(r.mode);
  j["post1"] = r.post1 ? json(*r.post1) : json(nullptr);
  j["post2"] = r.post2 ? json(*r.post2) : json(nullptr);
  j["queues"] = {{"task_set", r.task_set}, {"ongoing", r.ongoing}, {"ready", r.ready}, {"done", r.done}};
  json parts = json::array();
  for (auto p : r.parts) parts.push_back(sim::to_string(p));
  j["parts"] = parts;
  j["events"] = r.events;
  j["gt_low"] = r.gt_low ? json(std::string(core::to_string(*r.gt_low))) : json(nullptr);
  j["gt_high"] = r.gt_high ? json(std::string(core::to_string(*r.gt_high))) : json(nullptr);
  j["pull"] = vec_json(r.pull);
  j["contact"] = r.contact;
  return j;
}

inline sim::TickRecord record_from_json(const json& j) {
  using detail::json_vec;
  sim::TickRecord r;
  r.tick = j.at("tick").get<std::int64_t>();
  r.t = j.at("t").get<double>();
  r.wrist = json_vec(j.at("wrist"));
  if (!j.at("raw").is_null()) r.raw = json_vec(j["raw"]);
  if (!j.at("smooth").is_null()) r.smooth = json_vec(j["smooth"]);
  r.ee = json_vec(j.at("ee"));
  r.ee_vel = json_vec(j.at("ee_vel"));
  const auto mode = j.at("mode").get<std::string>();
  if (mode != "CE" && mode != "CO") throw InvalidParameter("unknown mode '" + mode + "'");
  r.mode = mode == "CO" ? sim::Mode::CO : sim::Mode::CE;
  if (!j.at("post1").is_null()) r.post1 = j["post1"].get<std::array<double, 5>>();
  if (!j.at("post2").is_null()) r.post2 = j["post2"].get<std::array<double, 2>>();
  const auto& q = j.at("queues");
  r.task_set = q.at("task_set").get<std::vector<int>>();
  r.ongoing = q.at("ongoing").get<std::vector<int>>();
  r.ready = q.at("ready").get<std::vector<int>>();
  r.done = q.at("done").get<std::vector<int>>();
  const auto& parts = j.at("parts");
  if (!parts.is_array() || parts.size() != 4) throw InvalidParameter("expected 4 part states");
  for (std::size_t i = 0; i < 4; ++i) r.parts[i] = detail::part_state_from_string(parts[i].get<std::string>());
  r.events = j.at("events").get<std::vector<std::string>>();
  if (!j.at("gt_low").is_null()) r.gt_low = detail::label_from_json(j["gt_low"]);
  if (!j.at("gt_high").is_null()) r.gt_high = detail::label_from_json(j["gt_high"]);
  r.pull = json_vec(j.at("pull"));
  r.contact = j.at("contact").get<bool>();
  return r;
}

inline json header_json(const TrialLog& log) {
  return {{"type", "header"},
          {"variant", sim::to_string(log.variant)},
          {"seed", log.seed},
          {"dt", log.dt},
          {"ee0", detail::vec_json(log.ee0)},
          {"order", log.order},
          {"config", log.config}};
}

inline json end_json(const TrialLog& log) {
  return {{"type", "end"}, {"completed", log.completed}, {"t", log.end_time}, {"ticks", log.records.size()}};
}

/// Line-delimited JSON; doubles round-trip exactly.
inline void write_log(std::ostream& os, const TrialLog& log) {
  os << header_json(log).dump() << '\n';
  for (const auto& r : log.records) os << record_to_json(r).dump() << '\n';
  if (log.ended) os << end_json(log).dump() << '\n';
}

inline std::string log_to_string(const TrialLog& log) {
  std::ostringstream os;
  write_log(os, log);
  return os.str();
}

/// Parses a log. A missing end marker leaves `ended` false (truncated log).
inline TrialLog read_log(std::istream& is) {
  TrialLog log;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        log.variant = variant_from_string(j.at("variant").get<std::string>());
        log.seed = j.at("seed").get<std::uint64_t>();
        log.dt = j.at("dt").get<double>();
        log.ee0 = detail::json_vec(j.at("ee0"));
        log.order = j.at("order").get<std::vector<int>>();
        log.config = j.value("config", json::object());
        header = true;
      } else if (type == "tick") {
        if (!header) throw InvalidParameter("tick before header");
        if (log.ended) throw InvalidParameter("tick after end marker");
        log.records.push_back(record_from_json(j));
      } else if (type == "end") {
        log.ended = true;
        log.completed = j.at("completed").get<bool>();
        log.end_time = j.at("t").get<double>();
        if (j.at("ticks").get<std::size_t>() != log.records.size()) throw InvalidParameter("tick count mismatch");
      } else {
        throw InvalidParameter("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw InvalidParameter("log line " + std::to_string(lineno) + ": " + e.what());
    } catch (const InvalidParameter& e) {
      throw InvalidParameter("log line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw InvalidParameter("log has no header");
  return log;
}

inline TrialLog read_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open log " + path);
  return read_log(in);
}

}  // namespace hit::harness
