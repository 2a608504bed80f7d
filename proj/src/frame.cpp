#include "gazescale/frame.hpp"

namespace gazescale {

std::string_view to_string(Hand hand) { return hand == Hand::Left ? "left" : "right"; }

std::optional<Hand> hand_from_string(std::string_view s) {
  if (s == "left") return Hand::Left;
  if (s == "right") return Hand::Right;
  return std::nullopt;
}

std::string_view to_string(Technique t) {
  switch (t) {
    case Technique::PTZArea:
      return "ptz-area";
    case Technique::PTZAngle:
      return "ptz-angle";
    case Technique::PTZSpan:
      return "ptz-span";
    case Technique::PushPullDepth:
      return "push-pull-depth";
    case Technique::Bimanual:
      return "bimanual";
  }
  return "unknown";
}

std::optional<Technique> technique_from_string(std::string_view s) {
  for (Technique t : kAllTechniques) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

bool is_ptz(Technique t) {
  return t == Technique::PTZArea || t == Technique::PTZAngle || t == Technique::PTZSpan;
}

}  // namespace gazescale
