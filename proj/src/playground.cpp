#include "gazescale/playground.hpp"

#include <cmath>
#include <set>

#include "gazescale/errors.hpp"

namespace gazescale {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json base_reply(const char* type) { return {{"type", type}, {"version", kProtocolVersion}}; }

const std::set<std::string> kFrameKeys = {"type", "version", "t",      "head",  "eye_l",
                                          "eye_r", "gaze",   "hand_l", "hand_r", "pinch"};

}  // namespace

json protocol_error(const std::string& code, const std::string& message) {
  json e = base_reply("error");
  e["code"] = code;
  e["message"] = message;
  return e;
}

json event_to_json(const ModeEvent& e) {
  json j = {{"kind", std::string(to_string(e.kind))},
            {"t", e.t},
            {"scale", e.scale},
            {"center", vec_json(e.center)}};
  if (e.kind == EventKind::ModeOut) {
    j["from"] = std::string(to_string(e.from));
    j["forced"] = e.forced;
  }
  if (e.input) {
    j["input"] = {{"kind", std::string(to_string(e.input->kind))}, {"value", e.input->value}};
  }
  if (e.hand) j["hand"] = std::string(to_string(*e.hand));
  return j;
}

PlaygroundSession::PlaygroundSession(std::string token, EngineConfig cfg, Technique technique)
    : token_(std::move(token)), cfg_(std::move(cfg)), technique_(technique) {
  cfg_.validate();
  rebuild();
}

void PlaygroundSession::rebuild() {
  SceneObject obj;
  obj.center = scene_.object_start();
  obj.base_diameter = scene_.base_diameter();
  interaction_ = std::make_unique<Interaction>(technique_, cfg_, obj);
  last_event_.reset();
}

json PlaygroundSession::welcome() const {
  json j = base_reply("welcome");
  j["session"] = token_;
  j["technique"] = std::string(to_string(technique_));
  j["config"] = config_to_json(cfg_);
  j["scene"] = trial_spec_to_json(scene_);
  j["object"] = {{"center", vec_json(interaction_->object().center)},
                 {"scale", interaction_->object().scale},
                 {"diameter", interaction_->object().diameter()}};
  j["target"] = {{"center", vec_json(scene_.target_center())}, {"scale", scene_.target_scale}};
  return j;
}

json PlaygroundSession::handle(const json& request) {
  if (!request.is_object() || !request.contains("type") || !request["type"].is_string()) {
    return protocol_error("bad_request", "message must be an object with a string \"type\"");
  }
  if (!request.contains("version") || !request["version"].is_number_integer()) {
    return protocol_error("bad_request", "message must carry an integer \"version\"");
  }
  if (request["version"].get<int>() != kProtocolVersion) {
    return protocol_error("version_mismatch",
                          "server speaks version " + std::to_string(kProtocolVersion));
  }
  const std::string type = request["type"].get<std::string>();
  try {
    if (type == "hello") return on_hello(request);
    if (type == "frame") return on_frame(request);
    if (type == "config_get") {
      json j = base_reply("config");
      j["config"] = config_to_json(cfg_);
      return j;
    }
    if (type == "config_patch") return on_config_patch(request);
    if (type == "reset") return on_reset(request);
  } catch (const NonMonotonicTimestamp& e) {
    return protocol_error("non_monotonic_timestamp", e.what());
  } catch (const ConfigError& e) {
    return protocol_error("invalid_config", e.what());
  } catch (const SchemaError& e) {
    return protocol_error("invalid_message", e.what());
  } catch (const json::exception& e) {
    return protocol_error("invalid_message", e.what());
  } catch (const Error& e) {
    return protocol_error("engine_error", e.what());
  }
  return protocol_error("unknown_type", "unknown message type \"" + type + "\"");
}

json PlaygroundSession::on_hello(const json& msg) {
  // A resumed session keeps its state; technique and scene only apply to new ones.
  if (msg.contains("resume")) return welcome();
  bool changed = false;
  if (msg.contains("technique")) {
    const auto t = technique_from_string(msg["technique"].get<std::string>());
    if (!t) throw SchemaError("unknown technique");
    technique_ = *t;
    changed = true;
  }
  if (msg.contains("scene")) {
    scene_ = trial_spec_from_json(msg["scene"]);
    changed = true;
  }
  if (changed) rebuild();
  return welcome();
}

json PlaygroundSession::on_reset(const json& msg) {
  if (msg.contains("technique")) {
    const auto t = technique_from_string(msg["technique"].get<std::string>());
    if (!t) throw SchemaError("unknown technique");
    technique_ = *t;
  }
  rebuild();
  return welcome();
}

json PlaygroundSession::on_config_patch(const json& msg) {
  if (!msg.contains("patch")) throw SchemaError("config_patch needs a \"patch\" object");
  EngineConfig next = apply_config_patch(cfg_, msg["patch"]);
  interaction_->set_config(next);
  cfg_ = next;
  json j = base_reply("config");
  j["config"] = config_to_json(cfg_);
  return j;
}

Frame PlaygroundSession::frame_from_wire(const json& msg) {
  for (const auto& [k, v] : msg.items()) {
    if (!kFrameKeys.count(k)) throw SchemaError("unknown field \"" + k + "\" in frame");
  }
  const ViewFrame camera = ViewFrame::looking_forward({});
  auto vec = [](const Vec3& v) { return vec_json(v); };

  json f;
  f["t"] = msg.at("t");
  f["head"] = msg.contains("head") ? msg["head"]
                                   : json{{"origin", vec(camera.head_origin)},
                                          {"forward", vec(camera.forward)},
                                          {"up", vec(camera.up)}};
  f["eye_l"] = msg.contains("eye_l") ? msg["eye_l"] : vec(camera.left_eye);
  f["eye_r"] = msg.contains("eye_r") ? msg["eye_r"] : vec(camera.right_eye);

  const json& gaze = msg.at("gaze");
  if (!gaze.is_object() || !gaze.contains("dir")) throw SchemaError("gaze needs \"dir\"");
  for (const auto& [k, v] : gaze.items()) {
    if (k != "origin" && k != "dir") throw SchemaError("unknown field \"" + k + "\" in gaze");
  }
  const json& d = gaze["dir"];
  if (!d.is_array() || d.size() != 3 || !d[0].is_number() || !d[1].is_number() ||
      !d[2].is_number()) {
    throw SchemaError("gaze.dir must be [x, y, z]");
  }
  const Vec3 dir{d[0].get<double>(), d[1].get<double>(), d[2].get<double>()};
  if (!dir.finite() || dir.norm() < 1e-9) throw SchemaError("gaze.dir must be a nonzero vector");
  f["gaze"] = {{"dir", vec(dir.normalized())}};
  if (gaze.contains("origin")) {
    f["gaze"]["origin"] = gaze["origin"];
  } else {
    const json& l = f["eye_l"];
    const json& r = f["eye_r"];
    const Vec3 eye_l{l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>()};
    const Vec3 eye_r{r.at(0).get<double>(), r.at(1).get<double>(), r.at(2).get<double>()};
    f["gaze"]["origin"] = vec(midpoint(eye_l, eye_r));
  }
  f["hand_l"] = msg.contains("hand_l") ? msg["hand_l"] : json(nullptr);
  f["hand_r"] = msg.contains("hand_r") ? msg["hand_r"] : json(nullptr);

  Frame frame = frame_from_json(f);

  if (msg.contains("pinch")) {
    const json& p = msg["pinch"];
    if (!p.is_object()) throw SchemaError("pinch must be an object");
    for (const auto& [k, v] : p.items()) {
      const auto hand = hand_from_string(k);
      if (!hand || !v.is_boolean()) throw SchemaError("pinch maps \"left\"/\"right\" to booleans");
      auto& sample = frame.hand(*hand);
      if (v.get<bool>() && sample) {
        sample->thumb_tip = sample->hand_pos;
        sample->index_tip = sample->hand_pos;
      }
    }
  }
  return frame;
}

json PlaygroundSession::on_frame(const json& msg) {
  const Frame frame = frame_from_wire(msg);
  const StepResult r = interaction_->step(frame);
  const FrameDiagnostics& d = r.diagnostics;

  json j = base_reply("state");
  j["t"] = frame.t;
  j["mode"] = std::string(to_string(r.mode));
  j["outline"] = std::string(to_string(r.outline));
  j["aligned"] = d.aligned;
  j["gazed"] = d.gazed;
  j["tracked"] = d.tracked;
  j["overlap"] = d.overlap ? json{{"view_area_covered", d.overlap->view_area_covered},
                                  {"object_covered", d.overlap->object_covered}}
                           : json(nullptr);
  j["dispersion"] = d.dispersion ? json(*d.dispersion) : json(nullptr);
  j["control_input"] = d.control_input ? json{{"kind", std::string(to_string(d.control_input->kind))},
                                              {"value", d.control_input->value}}
                                       : json(nullptr);
  const SceneObject& obj = interaction_->object();
  j["object"] = {{"center", vec_json(obj.center)},
                 {"scale", obj.scale},
                 {"diameter", obj.diameter()}};
  json events = json::array();
  for (const ModeEvent& e : r.events) {
    events.push_back(event_to_json(e));
    if (e.kind == EventKind::ModeInTranslation || e.kind == EventKind::ModeInScaling ||
        e.kind == EventKind::ModeOut) {
      last_event_ = e;
    }
  }
  j["events"] = std::move(events);
  j["last_event"] = last_event_ ? event_to_json(*last_event_) : json(nullptr);
  return j;
}

SessionRegistry::SessionRegistry(EngineConfig cfg, Clock::duration grace)
    : cfg_(std::move(cfg)), grace_(grace) {
  cfg_.validate();
}

std::shared_ptr<PlaygroundSession> SessionRegistry::create(Technique technique) {
  std::lock_guard lock(mu_);
  const std::string token = "s" + std::to_string(next_id_++);
  auto s = std::make_shared<PlaygroundSession>(token, cfg_, technique);
  sessions_[token] = {s, std::nullopt};
  return s;
}

std::shared_ptr<PlaygroundSession> SessionRegistry::resume(const std::string& token,
                                                           Clock::time_point now) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(token);
  if (it == sessions_.end() || !it->second.detached_at) return nullptr;
  if (now - *it->second.detached_at > grace_) {
    sessions_.erase(it);
    return nullptr;
  }
  it->second.detached_at.reset();
  return it->second.session;
}

void SessionRegistry::detach(const std::string& token, Clock::time_point now) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(token);
  if (it != sessions_.end()) it->second.detached_at = now;
}

void SessionRegistry::remove(const std::string& token) {
  std::lock_guard lock(mu_);
  sessions_.erase(token);
}

void SessionRegistry::sweep(Clock::time_point now) {
  std::lock_guard lock(mu_);
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (it->second.detached_at && now - *it->second.detached_at > grace_) {
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::size_t SessionRegistry::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

}  // namespace gazescale
