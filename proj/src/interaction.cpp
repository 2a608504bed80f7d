#include "gazescale/interaction.hpp"

#include "gazescale/errors.hpp"

namespace gazescale {

namespace {

constexpr std::size_t idx(Hand h) { return h == Hand::Left ? 0 : 1; }

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Idle:
      return "idle";
    case Mode::Translation:
      return "translation";
    case Mode::Scaling:
      return "scaling";
  }
  return "unknown";
}

std::string_view to_string(Outline o) {
  switch (o) {
    case Outline::None:
      return "none";
    case Outline::White:
      return "white";
    case Outline::Orange:
      return "orange";
    case Outline::Yellow:
      return "yellow";
  }
  return "unknown";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::ModeInTranslation:
      return "mode_in_translation";
    case EventKind::ModeInScaling:
      return "mode_in_scaling";
    case EventKind::ModeOut:
      return "mode_out";
    case EventKind::ScaleChanged:
      return "scale_changed";
    case EventKind::ObjectMoved:
      return "object_moved";
    case EventKind::TrackingLoss:
      return "tracking_loss";
  }
  return "unknown";
}

Outline outline_for(Mode mode, bool gazed) {
  switch (mode) {
    case Mode::Scaling:
      return Outline::Yellow;
    case Mode::Translation:
      return Outline::Orange;
    case Mode::Idle:
      break;
  }
  return gazed ? Outline::White : Outline::None;
}

PinchState pinch_detect(const Vec3& thumb_tip, const Vec3& index_tip, const PinchState& prev,
                        double onset, double release) {
  const double s = span(thumb_tip, index_tip);
  PinchState next;
  next.pinching = prev.pinching ? !(s > release) : s < onset;
  next.pinch_point = midpoint(thumb_tip, index_tip);
  return next;
}

ControlKind control_kind(Technique t) {
  switch (t) {
    case Technique::PTZArea:
      return ControlKind::Area;
    case Technique::PTZAngle:
      return ControlKind::Angle;
    case Technique::PTZSpan:
      return ControlKind::Span;
    case Technique::PushPullDepth:
      return ControlKind::Depth;
    case Technique::Bimanual:
      return ControlKind::BimanualDistance;
  }
  return ControlKind::Span;
}

ControlInput extract_input(Technique technique, const Frame& frame, const EngineConfig& cfg) {
  const ControlKind kind = control_kind(technique);
  if (technique == Technique::Bimanual) {
    if (!frame.left || !frame.right) throw MissingTrackingData("bimanual needs both hands");
    const Vec3 l = midpoint(frame.left->thumb_tip, frame.left->index_tip);
    const Vec3 r = midpoint(frame.right->thumb_tip, frame.right->index_tip);
    return {kind, distance(l, r)};
  }
  const auto& hand = frame.hand(cfg.dominant_hand);
  if (!hand) throw MissingTrackingData(std::string(to_string(cfg.dominant_hand)) + " hand");
  switch (technique) {
    case Technique::PTZArea: {
      const Rect2D rect = stereoscopic_view_rect(hand->thumb_tip, hand->index_tip, frame.head);
      return {kind, rect.area() / cfg.display_window_area()};
    }
    case Technique::PTZAngle:
      return {kind, finger_angle(frame.gaze.origin, hand->thumb_tip, hand->index_tip)};
    case Technique::PTZSpan:
      return {kind, span(hand->thumb_tip, hand->index_tip)};
    case Technique::PushPullDepth: {
      const double depth = hand_depth(frame.head, hand->hand_pos);
      if (cfg.depth_mapping == DepthMapping::Direct) return {kind, depth};
      const ClampRange& r = cfg.clamps.depth;
      return {kind, (r.min + r.max) - clamp_input({kind, depth}, r).value};
    }
    case Technique::Bimanual:
      break;
  }
  return {kind, 0.0};
}

Interaction::Interaction(Technique technique, EngineConfig cfg, SceneObject object)
    : technique_(technique), cfg_(std::move(cfg)), object_(object) {
  cfg_.validate();
  set_config(cfg_);
}

void Interaction::set_config(const EngineConfig& cfg) {
  cfg.validate();
  cfg_ = cfg;
  for (auto& hf : hand_filters_) {
    hf.thumb.set_params(cfg_.filter);
    hf.index.set_params(cfg_.filter);
    hf.pos.set_params(cfg_.filter);
  }
  gaze_origin_filter_.set_params(cfg_.filter);
  gaze_dir_filter_.set_params(cfg_.filter);
}

void Interaction::snap_object(const Vec3& center) {
  object_.center = center;
  pinned_ = true;
}

Frame Interaction::filter_frame(const Frame& raw) {
  Frame f = raw;
  for (Hand h : {Hand::Left, Hand::Right}) {
    auto& sample = f.hand(h);
    if (!sample) continue;
    auto& hf = hand_filters_[idx(h)];
    sample->thumb_tip = hf.thumb(sample->thumb_tip, raw.t);
    sample->index_tip = hf.index(sample->index_tip, raw.t);
    sample->hand_pos = hf.pos(sample->hand_pos, raw.t);
  }
  if (cfg_.filter_gaze) {
    f.gaze.origin = gaze_origin_filter_(raw.gaze.origin, raw.t);
    const Vec3 d = gaze_dir_filter_(raw.gaze.direction, raw.t);
    if (d.norm() > 1e-12) f.gaze.direction = d.normalized();
  }
  return f;
}

bool Interaction::has_required_hands(const Frame& f) const {
  if (technique_ != Technique::Bimanual) {
    return f.hand(cfg_.dominant_hand).has_value();
  }
  switch (state_.mode) {
    case Mode::Idle:
      return f.left.has_value() || f.right.has_value();
    case Mode::Translation:
      return state_.grab_hand && f.hand(*state_.grab_hand).has_value();
    case Mode::Scaling:
      return f.left.has_value() && f.right.has_value();
  }
  return false;
}

bool Interaction::evaluate_alignment(const Frame& f, bool gazed, FrameDiagnostics& diag) {
  const auto& hand = f.hand(cfg_.dominant_hand);
  switch (technique_) {
    case Technique::PTZArea: {
      OverlapRatios ratios;
      try {
        const Rect2D rect = stereoscopic_view_rect(hand->thumb_tip, hand->index_tip, f.head);
        const Disc2D disc = project_sphere(object_.sphere(), f.head);
        // A fully closed pinch gives a zero-area rect; that is simply no overlap.
        if (rect.area() > 0.0) ratios = overlap_ratios(rect, disc, cfg_.overlap_segments);
      } catch (const Error&) {
        ratios = {};
      }
      diag.overlap = ratios;
      auto [aligned, st] = eval_overlap_hysteretic(ratios.view_area_covered, ratios.object_covered,
                                                   gazed, state_.alignment, cfg_.alignment);
      state_.alignment = st;
      return aligned;
    }
    case Technique::PTZAngle:
    case Technique::PTZSpan:
    case Technique::PushPullDepth: {
      double dispersion = 180.0;
      try {
        dispersion = angular_dispersion(f.gaze, hand->hand_pos);
      } catch (const DegenerateVector&) {
        // Hand at the gaze origin; treat as maximally misaligned.
      }
      diag.dispersion = dispersion;
      auto [aligned, st] = eval_dispersion(dispersion, state_.alignment, cfg_.alignment);
      state_.alignment = st;
      return aligned;
    }
    case Technique::Bimanual:
      break;
  }
  return false;
}

ModeEvent Interaction::make_event(EventKind kind, double t) const {
  ModeEvent e;
  e.kind = kind;
  e.t = t;
  e.scale = object_.scale;
  e.center = object_.center;
  return e;
}

void Interaction::enter_scaling(const Frame& f, StepResult& out) {
  ControlInput raw;
  try {
    raw = extract_input(technique_, f, cfg_);
  } catch (const Error&) {
    return;  // no usable input this frame; stay idle
  }
  state_.session =
      begin_session(object_.scale, raw, cfg_.clamps.for_kind(control_kind(technique_)));
  state_.mode = Mode::Scaling;
  state_.grab_hand.reset();
  ModeEvent e = make_event(EventKind::ModeInScaling, f.t);
  e.input = state_.session->initial_input();
  out.events.push_back(e);
}

void Interaction::enter_translation(Hand hand, const Frame& f, StepResult& out) {
  state_.mode = Mode::Translation;
  state_.grab_hand = hand;
  state_.grab_offset = object_.center - state_.pinch[idx(hand)].pinch_point;
  ModeEvent e = make_event(EventKind::ModeInTranslation, f.t);
  e.hand = hand;
  out.events.push_back(e);
}

void Interaction::leave_mode(double t, bool forced, StepResult& out) {
  ModeEvent e = make_event(EventKind::ModeOut, t);
  e.from = state_.mode;
  e.forced = forced;
  state_.mode = Mode::Idle;
  state_.session.reset();
  state_.grab_hand.reset();
  out.events.push_back(e);
}

void Interaction::manipulate(const Frame& f, StepResult& out) {
  if (state_.mode == Mode::Translation && state_.grab_hand && !pinned_) {
    const Vec3 next = state_.pinch[idx(*state_.grab_hand)].pinch_point + state_.grab_offset;
    if (!(next == object_.center)) {
      object_.center = next;
      out.events.push_back(make_event(EventKind::ObjectMoved, f.t));
    }
  } else if (state_.mode == Mode::Scaling && state_.session) {
    try {
      const ControlInput in = extract_input(technique_, f, cfg_);
      const double s = scale_at(*state_.session, in, cfg_.clamps.for_kind(in.kind));
      if (s != object_.scale) {
        object_.scale = s;
        out.events.push_back(make_event(EventKind::ScaleChanged, f.t));
      }
    } catch (const Error&) {
      // Input momentarily unavailable (e.g. fingertip behind the eye plane); hold the scale.
    }
  }
}

StepResult Interaction::step(const Frame& raw) {
  if (last_t_ && !(raw.t > *last_t_)) {
    throw NonMonotonicTimestamp(*last_t_, raw.t);
  }
  last_t_ = raw.t;

  StepResult out;
  // (1) filters
  const Frame f = filter_frame(raw);
  const bool gazed = gaze_hits_sphere(f.gaze, object_.sphere(), cfg_.gaze_tolerance_deg);
  out.diagnostics.gazed = gazed;

  if (!has_required_hands(f)) {
    out.diagnostics.tracked = false;
    out.events.push_back(make_event(EventKind::TrackingLoss, f.t));
    if (!tracking_lost_since_) tracking_lost_since_ = f.t;
    if (state_.mode == Mode::Scaling && f.t - *tracking_lost_since_ > cfg_.tracking_loss_timeout) {
      leave_mode(f.t, true, out);
      state_.alignment = {};
    }
    state_.outline = outline_for(state_.mode, gazed);
    out.mode = state_.mode;
    out.outline = state_.outline;
    return out;
  }
  tracking_lost_since_.reset();

  // (2) alignment
  const bool aligned = evaluate_alignment(f, gazed, out.diagnostics);
  out.diagnostics.aligned = aligned;

  // (3) pinch
  std::array<bool, 2> onset{false, false};
  std::array<bool, 2> released{false, false};
  for (Hand h : {Hand::Left, Hand::Right}) {
    const auto& sample = f.hand(h);
    if (!sample) continue;
    const PinchState prev = state_.pinch[idx(h)];
    const PinchState next = pinch_detect(sample->thumb_tip, sample->index_tip, prev,
                                         cfg_.pinch_onset, cfg_.pinch_release);
    onset[idx(h)] = !prev.pinching && next.pinching;
    released[idx(h)] = prev.pinching && !next.pinching;
    state_.pinch[idx(h)] = next;
  }
  const Hand dom = cfg_.dominant_hand;

  // (4) transitions
  switch (technique_) {
    case Technique::PTZArea:
    case Technique::PTZAngle:
    case Technique::PTZSpan:
      if (state_.mode == Mode::Idle) {
        if (aligned) {
          enter_scaling(f, out);
        } else if (onset[idx(dom)] && gazed) {
          enter_translation(dom, f, out);
        }
      } else if (state_.mode == Mode::Scaling) {
        if (!aligned) leave_mode(f.t, false, out);
      } else if (released[idx(dom)]) {
        leave_mode(f.t, false, out);
      }
      break;

    case Technique::PushPullDepth:
      if (state_.mode == Mode::Idle) {
        if (onset[idx(dom)]) {
          if (aligned) {
            enter_scaling(f, out);
          } else if (gazed) {
            enter_translation(dom, f, out);
          }
        }
      } else if (released[idx(dom)]) {
        leave_mode(f.t, false, out);
      }
      break;

    case Technique::Bimanual: {
      const bool l = state_.pinch[idx(Hand::Left)].pinching && f.left;
      const bool r = state_.pinch[idx(Hand::Right)].pinching && f.right;
      if (state_.mode == Mode::Idle) {
        if (l && r && (onset[0] || onset[1]) && gazed) {
          enter_scaling(f, out);
        } else if (gazed) {
          for (Hand h : {dom, other(dom)}) {
            if (onset[idx(h)] && !state_.pinch[idx(other(h))].pinching) {
              enter_translation(h, f, out);
              break;
            }
          }
        }
      } else if (state_.mode == Mode::Scaling) {
        if (released[0] || released[1]) leave_mode(f.t, false, out);
      } else if (state_.grab_hand && released[idx(*state_.grab_hand)]) {
        leave_mode(f.t, false, out);
      }
      break;
    }
  }

  // (5) manipulation
  manipulate(f, out);

  try {
    out.diagnostics.control_input = extract_input(technique_, f, cfg_);
  } catch (const Error&) {
  }

  state_.outline = outline_for(state_.mode, gazed);
  out.mode = state_.mode;
  out.outline = state_.outline;
  return out;
}

}  // namespace gazescale
