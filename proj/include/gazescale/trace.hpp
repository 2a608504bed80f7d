#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gazescale/frame.hpp"

namespace gazescale {

enum class Direction { Up, Down, Left, Right };

inline constexpr Direction kAllDirections[] = {Direction::Up, Direction::Down, Direction::Left,
                                               Direction::Right};
inline constexpr double kTargetScales[] = {0.4, 0.67, 1.5, 2.5};

std::string_view to_string(Direction d);
std::optional<Direction> direction_from_string(std::string_view s);

struct TrialSpec {
  Direction target_direction = Direction::Up;
  double target_scale = 1.5;
  double object_depth = 2.0;      // m from the head
  double target_offset = 35.0;    // deg between object and target center rays
  double object_diameter = 14.0;  // deg, angular diameter at object_depth
  double snap_radius = 0.15;      // m
  double scale_tolerance = 0.1;   // m of world diameter

  bool valid() const;

  // radius = depth * tan(diameter / 2)
  double object_radius() const;
  double base_diameter() const { return 2.0 * object_radius(); }
  // Scene layout relative to a head at the origin looking along +z.
  Vec3 object_start(const Vec3& head_origin = {}) const;
  Vec3 target_center(const Vec3& head_origin = {}) const;
};

/// Parameters of the synthetic participant.
struct ActorParams {
  double movement_duration = 1.0;    // s, translation reach
  double gaze_latency = 0.1;         // s
  double positional_noise_sd = 0.0;  // m, per axis on every hand point
  double tremor_frequency = 8.0;     // Hz
  double tremor_amplitude = 0.0;     // m
  double open_span = 0.08;           // m, relaxed thumb-index span
  double reach_distance = 0.35;      // m from the eye when the hand is raised into view
  std::uint64_t seed = 0;

  bool valid() const;
};

struct TraceMeta {
  int schema_version = 1;
  double frame_rate_hz = 90.0;
  std::uint64_t seed = 0;
  std::optional<Technique> technique;
  TrialSpec trial_spec;
  ActorParams actor;
};

struct Trace {
  TraceMeta meta;
  std::vector<Frame> frames;
};

inline constexpr int kTraceSchemaVersion = 1;

nlohmann::json trial_spec_to_json(const TrialSpec& s);
TrialSpec trial_spec_from_json(const nlohmann::json& j);
nlohmann::json actor_to_json(const ActorParams& a);
ActorParams actor_from_json(const nlohmann::json& j);
nlohmann::json frame_to_json(const Frame& f);
Frame frame_from_json(const nlohmann::json& j);

/// Line-delimited JSON: a header record followed by one frame record per line.
void write_trace(std::ostream& out, const Trace& trace);
Trace read_trace(std::istream& in);

void save_trace(const Trace& trace, const std::string& path);
Trace load_trace(const std::string& path);

}  // namespace gazescale
