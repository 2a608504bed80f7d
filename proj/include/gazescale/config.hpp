#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "gazescale/alignment.hpp"
#include "gazescale/frame.hpp"
#include "gazescale/one_euro.hpp"
#include "gazescale/scaling.hpp"

namespace gazescale {

// How hand depth maps to the push-pull control input.
// Inverted: I = (min + max) - clamp(depth), so pulling the hand in grows the object.
enum class DepthMapping { Inverted, Direct };

struct ClampRanges {
  ClampRange area{0.001, 1.0};     // fraction of the display window
  ClampRange angle{3.0, 40.0};     // degrees
  ClampRange span{0.01, 0.15};     // meters
  ClampRange depth{0.1, 0.5};      // meters
  ClampRange bimanual{0.01, 0.8};  // meters

  const ClampRange& for_kind(ControlKind k) const;
  ClampRange& for_kind(ControlKind k);
};

struct EngineConfig {
  AlignmentConfig alignment;
  ClampRanges clamps;
  FilterParams filter;
  bool filter_gaze = false;

  double pinch_onset = 0.02;    // m, pinch when span drops below
  double pinch_release = 0.03;  // m, release when span rises above

  double frame_rate_hz = 90.0;
  // Display window in view-plane units; 115 deg horizontal field of view.
  double display_half_extent_u = std::tan(deg_to_rad(57.5));
  double display_half_extent_v = std::tan(deg_to_rad(57.5));

  Hand dominant_hand = Hand::Right;
  double gaze_tolerance_deg = 1.5;
  DepthMapping depth_mapping = DepthMapping::Inverted;
  double tracking_loss_timeout = 0.2;  // s, forced scaling mode-out
  int overlap_segments = 64;

  double display_window_area() const {
    return 4.0 * display_half_extent_u * display_half_extent_v;
  }

  // Throws ConfigError naming the first offending field.
  void validate() const;
};

nlohmann::json config_to_json(const EngineConfig& cfg);

/// Applies the keys present in `patch` on top of `base`. Unknown keys and
/// type errors throw ConfigError; the result is validated.
EngineConfig apply_config_patch(const EngineConfig& base, const nlohmann::json& patch);

EngineConfig config_from_json(const nlohmann::json& j);

/// Reads a config file holding a single JSON object. Missing keys keep defaults.
EngineConfig load_config(const std::string& path);

}  // namespace gazescale
