#include "gazescale/config.hpp"

#include <fstream>
#include <sstream>

#include "gazescale/errors.hpp"

namespace gazescale {

using nlohmann::json;

const ClampRange& ClampRanges::for_kind(ControlKind k) const {
  switch (k) {
    case ControlKind::Area:
      return area;
    case ControlKind::Angle:
      return angle;
    case ControlKind::Span:
      return span;
    case ControlKind::Depth:
      return depth;
    case ControlKind::BimanualDistance:
      return bimanual;
  }
  return span;
}

ClampRange& ClampRanges::for_kind(ControlKind k) {
  return const_cast<ClampRange&>(static_cast<const ClampRanges&>(*this).for_kind(k));
}

void EngineConfig::validate() const {
  if (!alignment.valid()) throw ConfigError("alignment thresholds");
  for (ControlKind k : {ControlKind::Area, ControlKind::Angle, ControlKind::Span, ControlKind::Depth,
                        ControlKind::BimanualDistance}) {
    if (!clamps.for_kind(k).valid()) {
      throw ConfigError("clamp_" + std::string(to_string(k)));
    }
  }
  if (!filter.valid()) throw ConfigError("filter parameters");
  if (!(pinch_onset > 0.0) || !(pinch_release > pinch_onset)) {
    throw ConfigError("pinch thresholds");
  }
  if (!(frame_rate_hz > 0.0)) throw ConfigError("frame_rate_hz");
  if (!(display_half_extent_u > 0.0) || !(display_half_extent_v > 0.0)) {
    throw ConfigError("display half extents");
  }
  if (!(gaze_tolerance_deg >= 0.0) || gaze_tolerance_deg >= 90.0) {
    throw ConfigError("gaze_tolerance_deg");
  }
  if (!(tracking_loss_timeout > 0.0)) throw ConfigError("tracking_loss_timeout");
  if (overlap_segments < 8) throw ConfigError("overlap_segments");
}

namespace {

json range_json(const ClampRange& r) { return json::array({r.min, r.max}); }

ClampRange range_from(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(key + " must be [min, max]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_from(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + " must be a number");
  return j.get<double>();
}

bool bool_from(const json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError(key + " must be a boolean");
  return j.get<bool>();
}

}  // namespace

json config_to_json(const EngineConfig& c) {
  json j;
  j["overlap_view_threshold"] = c.alignment.overlap_view_threshold;
  j["overlap_object_threshold"] = c.alignment.overlap_object_threshold;
  j["overlap_exit_factor"] = c.alignment.overlap_exit_factor;
  j["dispersion_mode_in"] = c.alignment.dispersion_mode_in;
  j["dispersion_mode_out"] = c.alignment.dispersion_mode_out;
  j["clamp_area"] = range_json(c.clamps.area);
  j["clamp_angle"] = range_json(c.clamps.angle);
  j["clamp_span"] = range_json(c.clamps.span);
  j["clamp_depth"] = range_json(c.clamps.depth);
  j["clamp_bimanual"] = range_json(c.clamps.bimanual);
  j["filter_min_cutoff"] = c.filter.min_cutoff;
  j["filter_beta"] = c.filter.beta;
  j["filter_d_cutoff"] = c.filter.d_cutoff;
  j["filter_gaze"] = c.filter_gaze;
  j["pinch_onset"] = c.pinch_onset;
  j["pinch_release"] = c.pinch_release;
  j["frame_rate_hz"] = c.frame_rate_hz;
  j["display_half_extent_u"] = c.display_half_extent_u;
  j["display_half_extent_v"] = c.display_half_extent_v;
  j["dominant_hand"] = std::string(to_string(c.dominant_hand));
  j["gaze_tolerance_deg"] = c.gaze_tolerance_deg;
  j["depth_mapping"] = c.depth_mapping == DepthMapping::Inverted ? "inverted" : "direct";
  j["tracking_loss_timeout"] = c.tracking_loss_timeout;
  j["overlap_segments"] = c.overlap_segments;
  return j;
}

EngineConfig apply_config_patch(const EngineConfig& base, const json& patch) {
  if (!patch.is_object()) throw ConfigError("config must be an object");
  EngineConfig c = base;
  for (const auto& [key, v] : patch.items()) {
    if (key == "overlap_view_threshold") {
      c.alignment.overlap_view_threshold = number_from(v, key);
    } else if (key == "overlap_object_threshold") {
      c.alignment.overlap_object_threshold = number_from(v, key);
    } else if (key == "overlap_exit_factor") {
      c.alignment.overlap_exit_factor = number_from(v, key);
    } else if (key == "dispersion_mode_in") {
      c.alignment.dispersion_mode_in = number_from(v, key);
    } else if (key == "dispersion_mode_out") {
      c.alignment.dispersion_mode_out = number_from(v, key);
    } else if (key == "clamp_area") {
      c.clamps.area = range_from(v, key);
    } else if (key == "clamp_angle") {
      c.clamps.angle = range_from(v, key);
    } else if (key == "clamp_span") {
      c.clamps.span = range_from(v, key);
    } else if (key == "clamp_depth") {
      c.clamps.depth = range_from(v, key);
    } else if (key == "clamp_bimanual") {
      c.clamps.bimanual = range_from(v, key);
    } else if (key == "filter_min_cutoff") {
      c.filter.min_cutoff = number_from(v, key);
    } else if (key == "filter_beta") {
      c.filter.beta = number_from(v, key);
    } else if (key == "filter_d_cutoff") {
      c.filter.d_cutoff = number_from(v, key);
    } else if (key == "filter_gaze") {
      c.filter_gaze = bool_from(v, key);
    } else if (key == "pinch_onset") {
      c.pinch_onset = number_from(v, key);
    } else if (key == "pinch_release") {
      c.pinch_release = number_from(v, key);
    } else if (key == "frame_rate_hz") {
      c.frame_rate_hz = number_from(v, key);
    } else if (key == "display_half_extent_u") {
      c.display_half_extent_u = number_from(v, key);
    } else if (key == "display_half_extent_v") {
      c.display_half_extent_v = number_from(v, key);
    } else if (key == "dominant_hand") {
      const auto h = v.is_string() ? hand_from_string(v.get<std::string>()) : std::nullopt;
      if (!h) throw ConfigError("dominant_hand must be \"left\" or \"right\"");
      c.dominant_hand = *h;
    } else if (key == "gaze_tolerance_deg") {
      c.gaze_tolerance_deg = number_from(v, key);
    } else if (key == "depth_mapping") {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "inverted") {
        c.depth_mapping = DepthMapping::Inverted;
      } else if (s == "direct") {
        c.depth_mapping = DepthMapping::Direct;
      } else {
        throw ConfigError("depth_mapping must be \"inverted\" or \"direct\"");
      }
    } else if (key == "tracking_loss_timeout") {
      c.tracking_loss_timeout = number_from(v, key);
    } else if (key == "overlap_segments") {
      if (!v.is_number_integer()) throw ConfigError("overlap_segments must be an integer");
      c.overlap_segments = v.get<int>();
    } else {
      throw ConfigError("unknown field \"" + key + "\"");
    }
  }
  c.validate();
  return c;
}

EngineConfig config_from_json(const json& j) { return apply_config_patch(EngineConfig{}, j); }

EngineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("config: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace gazescale
