#pragma once

#include <optional>
#include <string_view>

#include "gazescale/geometry.hpp"

namespace gazescale {

enum class Hand { Left, Right };

std::string_view to_string(Hand hand);
std::optional<Hand> hand_from_string(std::string_view s);
constexpr Hand other(Hand h) { return h == Hand::Left ? Hand::Right : Hand::Left; }

struct HandSample {
  Vec3 thumb_tip;
  Vec3 index_tip;
  Vec3 hand_pos;

  bool finite() const { return thumb_tip.finite() && index_tip.finite() && hand_pos.finite(); }
  bool operator==(const HandSample&) const = default;
};

/// One timestamped input sample. Either hand may be untracked.
struct Frame {
  double t = 0.0;  // seconds
  ViewFrame head;
  Ray gaze;
  std::optional<HandSample> left;
  std::optional<HandSample> right;

  const std::optional<HandSample>& hand(Hand h) const { return h == Hand::Left ? left : right; }
  std::optional<HandSample>& hand(Hand h) { return h == Hand::Left ? left : right; }
};

enum class Technique { PTZArea, PTZAngle, PTZSpan, PushPullDepth, Bimanual };

inline constexpr Technique kAllTechniques[] = {Technique::PTZArea, Technique::PTZAngle,
                                               Technique::PTZSpan, Technique::PushPullDepth,
                                               Technique::Bimanual};

std::string_view to_string(Technique t);
std::optional<Technique> technique_from_string(std::string_view s);

bool is_ptz(Technique t);

}  // namespace gazescale
