#pragma once

#include <string_view>

namespace gazescale {

enum class ControlKind { Area, Angle, Span, Depth, BimanualDistance };

std::string_view to_string(ControlKind kind);

/// Raw or clamped control parameter. Units depend on the kind: Area is a
/// fraction of the display window, Angle is degrees, the rest are meters.
struct ControlInput {
  ControlKind kind = ControlKind::Span;
  double value = 0.0;
};

struct ClampRange {
  double min = 0.0;
  double max = 0.0;

  bool valid() const { return min > 0.0 && min < max; }
  bool contains(double v) const { return v >= min && v <= max; }
  bool operator==(const ClampRange&) const = default;
};

/// Scale and clamped input frozen at scaling mode-in. Immutable once begun.
class ScalingSession {
 public:
  ScalingSession(double initial_scale, ControlInput initial_input)
      : s0_(initial_scale), i0_(initial_input) {}

  double initial_scale() const { return s0_; }
  const ControlInput& initial_input() const { return i0_; }

 private:
  double s0_;
  ControlInput i0_;
};

ControlInput clamp_input(ControlInput input, const ClampRange& range);

ScalingSession begin_session(double initial_scale, ControlInput raw_input, const ClampRange& range);

/// s_t = s_0 * clamp(I_t) / I_0. Throws KindMismatch if the kinds differ.
double scale_at(const ScalingSession& session, ControlInput raw_input, const ClampRange& range);

}  // namespace gazescale
