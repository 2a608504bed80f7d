#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "gazescale/alignment.hpp"
#include "gazescale/config.hpp"
#include "gazescale/frame.hpp"
#include "gazescale/geometry.hpp"
#include "gazescale/one_euro.hpp"
#include "gazescale/scaling.hpp"

namespace gazescale {

enum class Mode { Idle, Translation, Scaling };
enum class Outline { None, White, Orange, Yellow };

std::string_view to_string(Mode m);
std::string_view to_string(Outline o);

// Scaling -> yellow, translation -> orange, idle and gazed -> white.
Outline outline_for(Mode mode, bool gazed);

struct SceneObject {
  Vec3 center;
  double scale = 1.0;
  double base_diameter = 0.5;  // meters at scale 1

  double diameter() const { return base_diameter * scale; }
  Sphere sphere() const { return {center, 0.5 * diameter()}; }
};

struct PinchState {
  bool pinching = false;
  Vec3 pinch_point;  // midpoint of the tips; meaningful while pinching
};

/// Hysteretic span test: pinch below `onset`, release above `release`.
PinchState pinch_detect(const Vec3& thumb_tip, const Vec3& index_tip, const PinchState& prev,
                        double onset = 0.02, double release = 0.03);

enum class EventKind {
  ModeInTranslation,
  ModeInScaling,
  ModeOut,
  ScaleChanged,
  ObjectMoved,
  TrackingLoss,
};

std::string_view to_string(EventKind k);

struct ModeEvent {
  EventKind kind = EventKind::ModeOut;
  double t = 0.0;
  Mode from = Mode::Idle;  // ModeOut: the mode that was left
  bool forced = false;     // ModeOut caused by tracking loss
  double scale = 0.0;      // object scale after the event
  Vec3 center;             // object center after the event
  std::optional<ControlInput> input;  // ModeInScaling: clamped I_0
  std::optional<Hand> hand;           // ModeInTranslation: grabbing hand
};

struct InteractionState {
  Mode mode = Mode::Idle;
  AlignmentState alignment;
  std::optional<ScalingSession> session;  // present iff mode == Scaling
  Vec3 grab_offset;                       // object center minus pinch point, Translation only
  std::optional<Hand> grab_hand;
  Outline outline = Outline::None;
  std::array<PinchState, 2> pinch{};  // indexed by Hand
};

// Per-frame readouts, mostly for timelines and the playground.
struct FrameDiagnostics {
  bool tracked = true;
  bool gazed = false;
  bool aligned = false;
  std::optional<OverlapRatios> overlap;
  std::optional<double> dispersion;
  std::optional<ControlInput> control_input;
};

struct StepResult {
  std::vector<ModeEvent> events;
  FrameDiagnostics diagnostics;
  Mode mode = Mode::Idle;
  Outline outline = Outline::None;
};

ControlKind control_kind(Technique t);

/// Raw control input for the technique from an (already filtered) frame.
/// Depth is mapped through cfg.depth_mapping. Throws MissingTrackingData.
ControlInput extract_input(Technique technique, const Frame& frame, const EngineConfig& cfg);

/// Interaction mode automaton for one technique and one manipulated object.
///
/// Each step runs, in order: input filtering, alignment, pinch detection,
/// transition resolution, manipulation. Only one transition is taken per
/// frame, so at most one mode-in event is emitted per step.
class Interaction {
 public:
  Interaction(Technique technique, EngineConfig cfg, SceneObject object);

  StepResult step(const Frame& frame);

  /// Moves the object to `center` and pins it there; later translation no longer moves it.
  void snap_object(const Vec3& center);

  void set_config(const EngineConfig& cfg);

  Technique technique() const { return technique_; }
  const EngineConfig& config() const { return cfg_; }
  const SceneObject& object() const { return object_; }
  const InteractionState& state() const { return state_; }
  Mode mode() const { return state_.mode; }

 private:
  struct HandFilters {
    OneEuroFilter3 thumb;
    OneEuroFilter3 index;
    OneEuroFilter3 pos;
  };

  Frame filter_frame(const Frame& raw);
  bool has_required_hands(const Frame& f) const;
  bool evaluate_alignment(const Frame& f, bool gazed, FrameDiagnostics& diag);
  void enter_scaling(const Frame& f, StepResult& out);
  void enter_translation(Hand hand, const Frame& f, StepResult& out);
  void leave_mode(double t, bool forced, StepResult& out);
  void manipulate(const Frame& f, StepResult& out);
  ModeEvent make_event(EventKind kind, double t) const;

  Technique technique_;
  EngineConfig cfg_;
  SceneObject object_;
  InteractionState state_;

  std::array<HandFilters, 2> hand_filters_;
  OneEuroFilter3 gaze_origin_filter_;
  OneEuroFilter3 gaze_dir_filter_;

  std::optional<double> last_t_;
  std::optional<double> tracking_lost_since_;
  bool pinned_ = false;
};

}  // namespace gazescale
