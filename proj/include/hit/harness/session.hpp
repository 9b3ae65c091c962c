#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hit/harness/config.hpp"
#include "hit/harness/protocol.hpp"
#include "hit/harness/trial_log.hpp"
#include "hit/sim/world.hpp"

namespace hit::harness {

/// State frame for one tick.
inline json state_message(const sim::TickRecord& r) {
  using detail::vec_json;
  json parts = json::array();
  for (auto p : r.parts) parts.push_back(sim::to_string(p));
  return {{"type", "state"},
          {"tick", r.tick},
          {"t", r.t},
          {"mode", sim::to_string(r.mode)},
          {"post1", r.post1 ? json(*r.post1) : json(nullptr)},
          {"post2", r.post2 ? json(*r.post2) : json(nullptr)},
          {"ee", vec_json(r.ee)},
          {"wrist", r.smooth ? vec_json(*r.smooth) : json(nullptr)},
          {"contact", r.contact},
          {"queues", {{"task_set", r.task_set}, {"ongoing", r.ongoing}, {"ready", r.ready}, {"done", r.done}}},
          {"assemblies", parts}};
}

/// Observation message carrying everything a trial-log record fed the robot,
/// so a recorded trial can be replayed through a session exactly.
inline json obs_from_record(const sim::TickRecord& r) {
  json j = {{"type", "obs"}, {"t", r.t}, {"pressed", r.contact}};
  if (r.raw) {
    j["x"] = r.raw->x();
    j["y"] = r.raw->y();
  } else {
    j["x"] = nullptr;
    j["y"] = nullptr;
  }
  j["wrist"] = detail::vec_json(r.wrist);
  j["pull"] = detail::vec_json(r.pull);
  return j;
}

/// One live session: protocol state machine around a workcell. Each accepted
/// `obs` advances the simulation by exactly one tick, so the clock stops
/// whenever the client is silent.
class Session {
 public:
  static constexpr int kStateEvery = 6;

  explicit Session(ScenarioConfig cfg) : cfg_(std::move(cfg)), pending_(cfg_) {
    validate(cfg_);
    rebuild();
  }

  /// Handles one client message; returns the frames to send back.
  /// Throws protocol::ProtocolError (or InvalidParameter) on a bad message;
  /// the transport then sends an error frame and closes.
  std::vector<json> handle(const json& msg) {
    using protocol::ProtocolError;
    const auto type = msg.at("type").get<std::string>();
    if (type == "hello") return hello(msg);
    if (!greeted_) throw ProtocolError("expected hello first");
    if (type == "obs") return obs(msg);
    if (type == "cmd") return cmd(msg);
    throw ProtocolError("unknown message type '" + type + "'");
  }

  /// Parses a payload and handles it.
  std::vector<json> handle_payload(const std::string& payload) { return handle(protocol::parse_message(payload)); }

  /// Client silence past the staleness limit: the clock is already stopped,
  /// report it once.
  std::vector<json> on_silence() {
    if (stale_ || !greeted_) return {};
    stale_ = true;
    return {event("stale_pause")};
  }

  bool paused() const { return paused_; }
  bool stale() const { return stale_; }
  const sim::Workcell& cell() const { return *cell_; }
  const ScenarioConfig& config() const { return cfg_; }
  const sim::TickRecord& last() const { return last_; }

 private:
  void rebuild() {
    cell_.emplace(cfg_.world.cell, cfg_.seed);
    last_ = {};
    sim::fill_from_cell(last_, *cell_);
    last_t_.reset();
    last_wrist_ = cfg_.world.cell.workspace.prep.center;
  }

  json event(const std::string& tag, int part = 0) const {
    json e = {{"type", "event"}, {"tag", tag}, {"t", cell_->t()}};
    if (part > 0) e["part"] = part;
    return e;
  }

  std::vector<json> hello(const json& msg) {
    if (msg.contains("schema_version")) {
      const auto& v = msg["schema_version"];
      if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        throw protocol::ProtocolError("unsupported schema_version (server speaks " + std::to_string(kSchemaVersion) +
                                      ")");
    }
    greeted_ = true;
    return {{{"type", "hello"}, {"schema_version", kSchemaVersion}, {"config", config_to_json(cfg_)}},
            state_message(last_)};
  }

  static std::optional<Vec2> opt_vec(const json& msg, const char* k) {
    if (!msg.contains(k) || msg[k].is_null()) return std::nullopt;
    const auto& a = msg[k];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      throw protocol::ProtocolError(std::string("obs.") + k + " must be [x, y]");
    return Vec2(a[0].get<double>(), a[1].get<double>());
  }

  std::vector<json> obs(const json& msg) {
    using protocol::ProtocolError;
    if (!msg.contains("t") || !msg["t"].is_number()) throw ProtocolError("obs.t must be a number");
    const double t = msg["t"].get<double>();
    if (last_t_ && !(t > *last_t_)) throw ProtocolError("obs.t must increase");
    last_t_ = t;
    std::optional<Vec2> z;
    const bool has_x = msg.contains("x") && !msg["x"].is_null();
    const bool has_y = msg.contains("y") && !msg["y"].is_null();
    if (has_x != has_y) throw ProtocolError("obs.x and obs.y must both be set or both be null");
    if (has_x) {
      if (!msg["x"].is_number() || !msg["y"].is_number()) throw ProtocolError("obs.x and obs.y must be numbers");
      z = Vec2(msg["x"].get<double>(), msg["y"].get<double>());
      if (!z->allFinite()) throw ProtocolError("obs position must be finite");
    }
    bool pressed = false;
    if (msg.contains("pressed")) {
      if (!msg["pressed"].is_boolean()) throw ProtocolError("obs.pressed must be a boolean");
      pressed = msg["pressed"].get<bool>();
    }
    const auto wrist = opt_vec(msg, "wrist");
    const auto pull = opt_vec(msg, "pull");

    std::vector<json> out;
    if (stale_) {
      stale_ = false;
      out.push_back(event("resume"));
    }
    if (paused_) return out;

    sim::TickInput in;
    in.measurement = z;
    in.wrist = wrist ? *wrist : z ? *z : last_wrist_;
    last_wrist_ = in.wrist;
    in.pressed = pressed;
    if (pull) {
      in.pull = *pull;
    } else if (pressed) {
      // Pressed cursor drags the robot: pull grows with the cursor-ee offset.
      const auto& hp = cfg_.world.human.motion;
      Vec2 f = (in.wrist - cell_->ee()) * hp.pull_gain;
      if (f.norm() > hp.pull_max) f *= hp.pull_max / f.norm();
      in.pull = f;
    }
    cell_->tick(in);
    last_ = {};
    last_.wrist = in.wrist;
    last_.raw = z;
    sim::fill_from_cell(last_, *cell_);
    last_.pull = cell_->contact() ? in.pull : Vec2::Zero();
    for (const auto& e : cell_->events()) out.push_back(event(e.tag, e.part));
    if (cell_->ticks() % kStateEvery == 0) out.push_back(state_message(last_));
    return out;
  }

  std::vector<json> cmd(const json& msg) {
    using protocol::ProtocolError;
    if (!msg.contains("cmd") || !msg["cmd"].is_string()) throw ProtocolError("cmd.cmd must be a string");
    const auto c = msg["cmd"].get<std::string>();
    if (c == "reset") {
      cfg_ = pending_;
      rebuild();
      paused_ = false;
      return {event("reset"), state_message(last_)};
    }
    if (c == "pause") {
      bool p = true;
      if (msg.contains("paused")) {
        if (!msg["paused"].is_boolean()) throw ProtocolError("cmd.paused must be a boolean");
        p = msg["paused"].get<bool>();
      }
      paused_ = p;
      return {event(p ? "paused" : "resumed")};
    }
    if (c == "set_param") {
      if (!msg.contains("path") || !msg["path"].is_string()) throw ProtocolError("cmd.path must be a string");
      if (!msg.contains("value")) throw ProtocolError("cmd.value is required");
      const auto path = msg["path"].get<std::string>();
      json doc = config_to_json(pending_);
      json::json_pointer ptr;
      std::size_t start = 0;
      for (;;) {
        const auto dot = path.find('.', start);
        ptr /= path.substr(start, dot - start);
        if (dot == std::string::npos) break;
        start = dot + 1;
      }
      if (!doc.contains(ptr)) throw ProtocolError("unknown parameter '" + path + "'");
      doc[ptr] = msg["value"];
      pending_ = config_from_json(doc);
      // Parameters change between trials only.
      const bool fresh = cell_->ticks() == 0;
      if (fresh) {
        cfg_ = pending_;
        rebuild();
      }
      json e = event(fresh ? "param_set" : "param_pending");
      e["path"] = path;
      return {e};
    }
    throw ProtocolError("unknown cmd '" + c + "'");
  }

  ScenarioConfig cfg_;
  ScenarioConfig pending_;
  std::optional<sim::Workcell> cell_;
  sim::TickRecord last_;
  std::optional<double> last_t_;
  Vec2 last_wrist_ = Vec2::Zero();
  bool greeted_ = false;
  bool paused_ = false;
  bool stale_ = false;
};

}  // namespace hit::harness
