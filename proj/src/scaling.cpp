#include "gazescale/scaling.hpp"

#include <algorithm>

#include "gazescale/errors.hpp"

namespace gazescale {

std::string_view to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::Area:
      return "area";
    case ControlKind::Angle:
      return "angle";
    case ControlKind::Span:
      return "span";
    case ControlKind::Depth:
      return "depth";
    case ControlKind::BimanualDistance:
      return "bimanual_distance";
  }
  return "unknown";
}

ControlInput clamp_input(ControlInput input, const ClampRange& range) {
  input.value = std::clamp(input.value, range.min, range.max);
  return input;
}

ScalingSession begin_session(double initial_scale, ControlInput raw_input, const ClampRange& range) {
  if (!(initial_scale > 0.0)) {
    throw Error("scaling session needs a positive initial scale");
  }
  if (!range.valid()) {
    throw ConfigError("clamp range for " + std::string(to_string(raw_input.kind)));
  }
  return ScalingSession(initial_scale, clamp_input(raw_input, range));
}

double scale_at(const ScalingSession& session, ControlInput raw_input, const ClampRange& range) {
  if (raw_input.kind != session.initial_input().kind) {
    throw KindMismatch();
  }
  const double current = clamp_input(raw_input, range).value;
  return session.initial_scale() * (current / session.initial_input().value);
}

}  // namespace gazescale
