#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "gazescale/errors.hpp"
#include "gazescale/trace.hpp"

namespace gazescale {

using nlohmann::json;

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Up:
      return "up";
    case Direction::Down:
      return "down";
    case Direction::Left:
      return "left";
    case Direction::Right:
      return "right";
  }
  return "unknown";
}

std::optional<Direction> direction_from_string(std::string_view s) {
  for (Direction d : kAllDirections) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

bool TrialSpec::valid() const {
  return target_scale > 0.0 && object_depth > 0.0 && target_offset > 0.0 && target_offset < 90.0 &&
         object_diameter > 0.0 && object_diameter < 180.0 && snap_radius > 0.0 &&
         scale_tolerance > 0.0;
}

double TrialSpec::object_radius() const {
  return object_depth * std::tan(deg_to_rad(object_diameter) * 0.5);
}

Vec3 TrialSpec::object_start(const Vec3& head_origin) const {
  return head_origin + Vec3{0.0, 0.0, object_depth};
}

Vec3 TrialSpec::target_center(const Vec3& head_origin) const {
  const double a = deg_to_rad(target_offset);
  const double lateral = object_depth * std::sin(a);
  const double ahead = object_depth * std::cos(a);
  Vec3 offset;
  switch (target_direction) {
    case Direction::Up:
      offset = {0.0, lateral, ahead};
      break;
    case Direction::Down:
      offset = {0.0, -lateral, ahead};
      break;
    case Direction::Left:
      offset = {-lateral, 0.0, ahead};
      break;
    case Direction::Right:
      offset = {lateral, 0.0, ahead};
      break;
  }
  return head_origin + offset;
}

bool ActorParams::valid() const {
  return movement_duration > 0.0 && gaze_latency >= 0.0 && positional_noise_sd >= 0.0 &&
         tremor_frequency >= 0.0 && tremor_amplitude >= 0.0 && open_span > 0.0 &&
         reach_distance > 0.0;
}

namespace {

void expect_keys(const json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw SchemaError(std::string(where) + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw SchemaError(std::string("unknown field \"") + k + "\" in " + where);
  }
  for (const char* k : keys) {
    if (!j.contains(k)) throw SchemaError(std::string("missing field \"") + k + "\" in " + where);
  }
}

double num(const json& j, const char* name) {
  if (!j.is_number()) throw SchemaError(std::string(name) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(std::string(name) + " must be finite");
  return v;
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(std::string(name) + " must be [x, y, z]");
  return {num(j[0], name), num(j[1], name), num(j[2], name)};
}

std::string str(const json& j, const char* name) {
  if (!j.is_string()) throw SchemaError(std::string(name) + " must be a string");
  return j.get<std::string>();
}

json hand_json(const std::optional<HandSample>& h) {
  if (!h) return nullptr;
  return {{"thumb", vec_json(h->thumb_tip)},
          {"index", vec_json(h->index_tip)},
          {"pos", vec_json(h->hand_pos)}};
}

std::optional<HandSample> hand_from(const json& j, const char* name) {
  if (j.is_null()) return std::nullopt;
  expect_keys(j, {"thumb", "index", "pos"}, name);
  return HandSample{vec_from(j["thumb"], "thumb"), vec_from(j["index"], "index"),
                    vec_from(j["pos"], "pos")};
}

std::uint64_t seed_from(const json& j) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw SchemaError("seed must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

template <typename Fn>
auto with_line(std::size_t line, Fn&& fn) {
  try {
    return fn();
  } catch (const SchemaError& e) {
    throw ParseError(line, e.what());
  } catch (const ConfigError& e) {
    throw ParseError(line, e.what());
  } catch (const json::exception& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

json trial_spec_to_json(const TrialSpec& s) {
  return {{"target_direction", std::string(to_string(s.target_direction))},
          {"target_scale", s.target_scale},
          {"object_depth", s.object_depth},
          {"target_offset", s.target_offset},
          {"object_diameter", s.object_diameter},
          {"snap_radius", s.snap_radius},
          {"scale_tolerance", s.scale_tolerance}};
}

TrialSpec trial_spec_from_json(const json& j) {
  expect_keys(j,
              {"target_direction", "target_scale", "object_depth", "target_offset",
               "object_diameter", "snap_radius", "scale_tolerance"},
              "trial_spec");
  TrialSpec s;
  const auto dir = direction_from_string(str(j["target_direction"], "target_direction"));
  if (!dir) throw SchemaError("target_direction must be up, down, left or right");
  s.target_direction = *dir;
  s.target_scale = num(j["target_scale"], "target_scale");
  s.object_depth = num(j["object_depth"], "object_depth");
  s.target_offset = num(j["target_offset"], "target_offset");
  s.object_diameter = num(j["object_diameter"], "object_diameter");
  s.snap_radius = num(j["snap_radius"], "snap_radius");
  s.scale_tolerance = num(j["scale_tolerance"], "scale_tolerance");
  if (!s.valid()) throw SchemaError("trial_spec values out of range");
  return s;
}

json actor_to_json(const ActorParams& a) {
  return {{"movement_duration", a.movement_duration},
          {"gaze_latency", a.gaze_latency},
          {"positional_noise_sd", a.positional_noise_sd},
          {"tremor_frequency", a.tremor_frequency},
          {"tremor_amplitude", a.tremor_amplitude},
          {"open_span", a.open_span},
          {"reach_distance", a.reach_distance},
          {"seed", a.seed}};
}

ActorParams actor_from_json(const json& j) {
  expect_keys(j,
              {"movement_duration", "gaze_latency", "positional_noise_sd", "tremor_frequency",
               "tremor_amplitude", "open_span", "reach_distance", "seed"},
              "actor");
  ActorParams a;
  a.movement_duration = num(j["movement_duration"], "movement_duration");
  a.gaze_latency = num(j["gaze_latency"], "gaze_latency");
  a.positional_noise_sd = num(j["positional_noise_sd"], "positional_noise_sd");
  a.tremor_frequency = num(j["tremor_frequency"], "tremor_frequency");
  a.tremor_amplitude = num(j["tremor_amplitude"], "tremor_amplitude");
  a.open_span = num(j["open_span"], "open_span");
  a.reach_distance = num(j["reach_distance"], "reach_distance");
  a.seed = seed_from(j["seed"]);
  if (!a.valid()) throw SchemaError("actor values out of range");
  return a;
}

json frame_to_json(const Frame& f) {
  return {{"t", f.t},
          {"head",
           {{"origin", vec_json(f.head.head_origin)},
            {"forward", vec_json(f.head.forward)},
            {"up", vec_json(f.head.up)}}},
          {"eye_l", vec_json(f.head.left_eye)},
          {"eye_r", vec_json(f.head.right_eye)},
          {"gaze", {{"origin", vec_json(f.gaze.origin)}, {"dir", vec_json(f.gaze.direction)}}},
          {"hand_l", hand_json(f.left)},
          {"hand_r", hand_json(f.right)}};
}

Frame frame_from_json(const json& j) {
  expect_keys(j, {"t", "head", "eye_l", "eye_r", "gaze", "hand_l", "hand_r"}, "frame");
  Frame f;
  f.t = num(j["t"], "t");
  const json& head = j["head"];
  expect_keys(head, {"origin", "forward", "up"}, "head");
  f.head.head_origin = vec_from(head["origin"], "head.origin");
  f.head.forward = vec_from(head["forward"], "head.forward");
  f.head.up = vec_from(head["up"], "head.up");
  f.head.left_eye = vec_from(j["eye_l"], "eye_l");
  f.head.right_eye = vec_from(j["eye_r"], "eye_r");
  if (!f.head.valid()) throw SchemaError("head basis not orthonormal or eyes too far from head");
  const json& gaze = j["gaze"];
  expect_keys(gaze, {"origin", "dir"}, "gaze");
  f.gaze.origin = vec_from(gaze["origin"], "gaze.origin");
  f.gaze.direction = vec_from(gaze["dir"], "gaze.dir");
  if (std::abs(f.gaze.direction.norm() - 1.0) > 1e-9) throw SchemaError("gaze.dir must be unit length");
  f.left = hand_from(j["hand_l"], "hand_l");
  f.right = hand_from(j["hand_r"], "hand_r");
  return f;
}

void write_trace(std::ostream& out, const Trace& trace) {
  json header = {{"schema_version", trace.meta.schema_version},
                 {"frame_rate_hz", trace.meta.frame_rate_hz},
                 {"seed", trace.meta.seed},
                 {"technique", trace.meta.technique
                                   ? json(std::string(to_string(*trace.meta.technique)))
                                   : json(nullptr)},
                 {"trial_spec", trial_spec_to_json(trace.meta.trial_spec)},
                 {"actor", actor_to_json(trace.meta.actor)}};
  out << header.dump() << '\n';
  for (const Frame& f : trace.frames) {
    out << frame_to_json(f).dump() << '\n';
  }
}

Trace read_trace(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header record");
  ++line_no;
  with_line(line_no, [&] {
    const json h = json::parse(line);
    expect_keys(h, {"schema_version", "frame_rate_hz", "seed", "technique", "trial_spec", "actor"},
                "header");
    if (!h["schema_version"].is_number_integer()) throw SchemaError("schema_version must be an integer");
    const int version = h["schema_version"].get<int>();
    if (version != kTraceSchemaVersion) throw SchemaVersionMismatch(version);
    trace.meta.schema_version = version;
    trace.meta.frame_rate_hz = num(h["frame_rate_hz"], "frame_rate_hz");
    if (!(trace.meta.frame_rate_hz > 0.0)) throw SchemaError("frame_rate_hz must be positive");
    trace.meta.seed = seed_from(h["seed"]);
    if (!h["technique"].is_null()) {
      const auto t = technique_from_string(str(h["technique"], "technique"));
      if (!t) throw SchemaError("unknown technique");
      trace.meta.technique = *t;
    }
    trace.meta.trial_spec = trial_spec_from_json(h["trial_spec"]);
    trace.meta.actor = actor_from_json(h["actor"]);
    return 0;
  });

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) throw ParseError(line_no, "empty line");
    Frame f = with_line(line_no, [&] { return frame_from_json(json::parse(line)); });
    if (!trace.frames.empty() && !(f.t > trace.frames.back().t)) {
      throw ParseError(line_no, "timestamp does not increase");
    }
    trace.frames.push_back(std::move(f));
  }
  if (trace.frames.empty()) throw ParseError(line_no + 1, "trace has no frames");
  return trace;
}

void save_trace(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  write_trace(out, trace);
  if (!out) throw Error("write failed for " + path);
}

Trace load_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_trace(in);
}

}  // namespace gazescale
