#include "gazescale/synth.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "gazescale/errors.hpp"
#include "gazescale/metrics.hpp"
#include "gazescale/random.hpp"

namespace gazescale {

namespace {

constexpr double kClosedSpan = 0.005;    // m, fingertips touching
constexpr double kGazeRate = 200.0;      // Hz, eye tracker clock before resampling
constexpr double kWaitTimeout = 1.0;     // s
constexpr double kPreAlignAngle = 30.0;  // deg off the gaze line
constexpr double kExitDistance = 0.3;    // m, lateral move that breaks alignment
constexpr double kExitSweep = 50.0;      // deg, same for an arc about the eye

const Vec3 kRightRest{0.12, -0.30, 0.55};
const Vec3 kLeftRest{-0.12, -0.30, 0.55};

struct HandPose {
  Vec3 p;  // pinch point, also reported as the hand position
  double span = 0.08;
  Vec3 axis;  // unit, thumb to index
};

Vec3 slerp(const Vec3& a, const Vec3& b, double s) {
  const double theta = angle_between(a, b);
  if (theta < 1e-12) return b;
  const double st = std::sin(theta);
  return a * (std::sin((1.0 - s) * theta) / st) + b * (std::sin(s * theta) / st);
}

Vec3 lerp(const Vec3& a, const Vec3& b, double s) { return a + (b - a) * s; }

double lerp(double a, double b, double s) { return a + (b - a) * s; }

class Actor {
 public:
  Actor(const TrialSpec& spec, const ActorParams& actor, Technique technique,
        const EngineConfig& cfg)
      : spec_(spec),
        actor_(actor),
        technique_(technique),
        cfg_(cfg),
        head_(ViewFrame::looking_forward({})),
        eye_(head_.cyclopean_eye()),
        runner_(technique, spec, cfg, head_.head_origin),
        rng_(actor.seed) {
    if (!actor.valid()) throw Error("invalid actor parameters");
    right_ = {kRightRest, actor.open_span, rest_axis(Hand::Right)};
    if (technique == Technique::Bimanual) {
      left_ = HandPose{kLeftRest, actor.open_span, rest_axis(Hand::Left)};
    }
    if (actor.tremor_amplitude > 0.0) {
      tremor_phase_ = {2.0 * kPi * rng_.uniform(), 2.0 * kPi * rng_.uniform()};
    }
    history_.emplace_back(-1e300, runner_.interaction().object().center);

    trace_.meta.schema_version = kTraceSchemaVersion;
    trace_.meta.frame_rate_hz = cfg.frame_rate_hz;
    trace_.meta.seed = actor.seed;
    trace_.meta.technique = technique;
    trace_.meta.trial_spec = spec;
    trace_.meta.actor = actor;
  }

  Trace run() {
    hold(0.3);
    if (translate()) {
      switch (technique_) {
        case Technique::PTZArea:
        case Technique::PTZAngle:
        case Technique::PTZSpan:
          scale_ptz();
          break;
        case Technique::PushPullDepth:
          scale_push_pull();
          break;
        case Technique::Bimanual:
          scale_bimanual();
          break;
      }
    }
    hold(0.3);
    return std::move(trace_);
  }

 private:
  Mode mode() const { return runner_.interaction().mode(); }

  int frames_for(double seconds) const {
    return std::max(1, static_cast<int>(std::lround(seconds * cfg_.frame_rate_hz)));
  }

  // Combined gaze at the nearest eye-tracker sample, fixating where the object was
  // one latency earlier.
  Vec3 gaze_direction(double t) const {
    const double sample_t = std::round(t * kGazeRate) / kGazeRate;
    const double look_t = sample_t - actor_.gaze_latency;
    Vec3 c = history_.front().second;
    for (const auto& [ht, hc] : history_) {
      if (ht > look_t) break;
      c = hc;
    }
    return (c - eye_).normalized();
  }

  // Diagonal in the head's right/up plane, mirrored for the left hand.
  Vec3 rest_axis(Hand hand) const {
    const Vec3 side = hand == Hand::Right ? head_.right() : head_.right() * -1.0;
    return (side + head_.up).normalized();
  }

  // Rest axis turned to face along `view`.
  Vec3 facing_axis(Hand hand, const Vec3& view) const {
    const Vec3 a = rest_axis(hand);
    return (a - view * dot(a, view)).normalized();
  }

  static HandSample ideal_sample(const HandPose& pose) {
    const Vec3 a = pose.axis * (0.5 * pose.span);
    return {pose.p - a, pose.p + a, pose.p};
  }

  HandSample sample(const HandPose& pose, Hand hand, double t) {
    HandSample s = ideal_sample(pose);
    if (actor_.tremor_amplitude > 0.0) {
      const double w = std::sin(2.0 * kPi * actor_.tremor_frequency * t +
                                tremor_phase_[hand == Hand::Left ? 0 : 1]);
      const Vec3 shift = Vec3{1.0, 1.0, 1.0} * (actor_.tremor_amplitude * w / std::sqrt(3.0));
      s.thumb_tip = s.thumb_tip + shift;
      s.index_tip = s.index_tip + shift;
      s.hand_pos = s.hand_pos + shift;
    }
    const double sd = actor_.positional_noise_sd;
    if (sd > 0.0) {
      s.thumb_tip = s.thumb_tip + rng_.normal_vec3(sd);
      s.index_tip = s.index_tip + rng_.normal_vec3(sd);
      s.hand_pos = s.hand_pos + rng_.normal_vec3(sd);
    }
    return s;
  }

  void emit() {
    Frame f;
    f.t = static_cast<double>(frame_index_) / cfg_.frame_rate_hz;
    f.head = head_;
    f.gaze = {eye_, gaze_direction(f.t)};
    f.right = sample(right_, Hand::Right, f.t);
    if (left_) f.left = sample(*left_, Hand::Left, f.t);
    runner_.step(f);
    history_.emplace_back(f.t, runner_.interaction().object().center);
    trace_.frames.push_back(std::move(f));
    ++frame_index_;
  }

  void hold(double seconds) {
    for (int i = frames_for(seconds); i > 0; --i) emit();
  }

  // Calls `pose(s)` with s on a minimum-jerk profile, one frame at a time.
  void animate(double seconds, const std::function<void(double)>& pose,
               const std::function<bool()>& stop = {}) {
    const int n = frames_for(seconds);
    for (int i = 1; i <= n; ++i) {
      pose(min_jerk(static_cast<double>(i) / n));
      emit();
      if (stop && stop()) return;
    }
  }

  bool wait_until(const std::function<bool()>& done) {
    for (int i = frames_for(kWaitTimeout); i > 0 && !done(); --i) emit();
    return done();
  }

  void set_span(double from, double to, double seconds, bool both) {
    animate(seconds, [&](double s) {
      right_.span = lerp(from, to, s);
      if (both && left_) left_->span = lerp(from, to, s);
    });
  }
  void close_fingers(bool both = false) { set_span(actor_.open_span, kClosedSpan, 0.15, both); }
  void open_fingers(bool both = false) { set_span(kClosedSpan, actor_.open_span, 0.15, both); }

  Vec3 target_gaze() const { return (runner_.target_center() - eye_).normalized(); }

  // Unit vector from the gaze line toward the current right hand.
  Vec3 hand_side(const Vec3& g) const {
    Vec3 b = right_.p - eye_;
    b = b - g * dot(b, g);
    if (b.norm() < 1e-6) b = head_.right();
    return b.normalized();
  }

  // Raises the right hand off to the side of the gaze, then sweeps it onto the
  // gaze line at `reach` from the eye.
  void approach_gaze_line(const Vec3& g, double reach) {
    const Vec3 b = hand_side(g);
    const double a = deg_to_rad(kPreAlignAngle);
    const Vec3 pre_dir = (g * std::cos(a) + b * std::sin(a)).normalized();
    const Vec3 start = right_.p;
    const Vec3 axis_from = right_.axis;
    // Angle is read at the eye, so those fingers face it; the others stay in the head plane.
    const Vec3 axis_to = technique_ == Technique::PTZAngle ? facing_axis(Hand::Right, g)
                                                           : rest_axis(Hand::Right);
    animate(0.6, [&](double s) {
      right_.p = lerp(start, eye_ + pre_dir * reach, s);
      right_.axis = lerp(axis_from, axis_to, s).normalized();
    });
    animate(0.6, [&](double s) { right_.p = eye_ + slerp(pre_dir, g, s) * reach; });
  }

  double target_input(double i0, double s0) const {
    const double it = i0 * spec_.target_scale / s0;
    const ClampRange& r = cfg_.clamps.for_kind(control_kind(technique_));
    if (!r.contains(it)) {
      std::ostringstream msg;
      msg << to_string(technique_) << " x" << spec_.target_scale << " needs input " << it
          << " from I_0 " << i0 << ", outside [" << r.min << ", " << r.max << "]";
      throw InfeasibleTarget(msg.str());
    }
    return it;
  }

  // Raw input for the right hand at `p` with fingertip span `span`.
  double raw_input(const Vec3& p, double span) const {
    Frame f;
    f.head = head_;
    f.gaze = {eye_, target_gaze()};
    f.right = ideal_sample({p, span, right_.axis});
    return extract_input(technique_, f, cfg_).value;
  }

  double solve_span(const Vec3& p, double target) const {
    double lo = 1e-4;
    double hi = 0.5;
    if (target < raw_input(p, lo) || target > raw_input(p, hi)) {
      throw InfeasibleTarget("no fingertip span produces input " + std::to_string(target));
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (raw_input(p, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double depth_for_input(double input) const {
    if (cfg_.depth_mapping == DepthMapping::Direct) return input;
    return cfg_.clamps.depth.min + cfg_.clamps.depth.max - input;
  }

  const ScalingSession& session() const { return *runner_.interaction().state().session; }

  bool translate() {
    close_fingers();
    if (!wait_until([&] { return mode() == Mode::Translation; })) return false;
    const Vec3 start = right_.p;
    const Vec3 delta = runner_.target_center() - runner_.interaction().object().center;
    animate(actor_.movement_duration, [&](double s) { right_.p = start + delta * s; },
            [&] { return runner_.snapped(); });
    wait_until([&] { return runner_.snapped(); });
    open_fingers();
    wait_until([&] { return mode() == Mode::Idle; });
    hold(0.2);
    return runner_.snapped();
  }

  void scale_ptz() {
    const Vec3 g = target_gaze();
    const Vec3 side = hand_side(g);
    approach_gaze_line(g, actor_.reach_distance);
    if (wait_until([&] { return mode() == Mode::Scaling; })) {
      hold(0.3);
      const double it =
          target_input(session().initial_input().value, session().initial_scale());
      const double span_to = solve_span(right_.p, it);
      const double span_from = right_.span;
      animate(0.8, [&](double s) { right_.span = lerp(span_from, span_to, s); });
      hold(1.0);
    }
    leave_gaze_line(g, side);
  }

  // Moves the hand off the gaze without disturbing the control input: an arc about
  // the eye across the finger axis for Angle, a slide at constant depth otherwise.
  void leave_gaze_line(const Vec3& g, const Vec3& side) {
    const Vec3 from = right_.p;
    if (technique_ == Technique::PTZAngle) {
      Vec3 e = cross(right_.axis, g).normalized();
      if (dot(e, side) < 0.0) e = e * -1.0;
      const double reach = distance(from, eye_);
      const double sweep = deg_to_rad(kExitSweep);
      animate(0.3, [&](double s) {
        right_.p = eye_ + (g * std::cos(sweep * s) + e * std::sin(sweep * s)) * reach;
      });
    } else {
      Vec3 lateral = side - head_.forward * dot(side, head_.forward);
      lateral = lateral.norm() < 1e-6 ? head_.right() : lateral.normalized();
      animate(0.3, [&](double s) { right_.p = from + lateral * (kExitDistance * s); });
    }
    wait_until([&] { return mode() != Mode::Scaling; });
  }

  void scale_push_pull() {
    const Vec3 g = target_gaze();
    const double cos_fwd = dot(g, head_.forward);
    const double i0 = planned_initial_input(technique_, spec_.target_scale, cfg_);
    approach_gaze_line(g, depth_for_input(i0) / cos_fwd);
    hold(0.4);
    close_fingers();
    if (wait_until([&] { return mode() == Mode::Scaling; })) {
      hold(0.3);
      const double it =
          target_input(session().initial_input().value, session().initial_scale());
      const Vec3 from = right_.p;
      const Vec3 to = eye_ + g * (depth_for_input(it) / cos_fwd);
      animate(0.8, [&](double s) { right_.p = lerp(from, to, s); });
      hold(1.0);
    }
    open_fingers();
    wait_until([&] { return mode() != Mode::Scaling; });
  }

  void scale_bimanual() {
    const Vec3 g = target_gaze();
    const Vec3 c = eye_ + g * actor_.reach_distance;
    Vec3 u = head_.right() - g * dot(head_.right(), g);
    u = u.normalized();
    const double i0 = planned_initial_input(technique_, spec_.target_scale, cfg_);

    const Vec3 r0 = right_.p;
    const Vec3 l0 = left_->p;
    animate(0.6, [&](double s) {
      right_.p = lerp(r0, c + u * (0.5 * i0), s);
      left_->p = lerp(l0, c - u * (0.5 * i0), s);
    });
    hold(0.3);
    close_fingers(true);
    if (wait_until([&] { return mode() == Mode::Scaling; })) {
      hold(0.3);
      const double it =
          target_input(session().initial_input().value, session().initial_scale());
      const double from = distance(right_.p, left_->p);
      animate(0.8, [&](double s) {
        const double half = 0.5 * lerp(from, it, s);
        right_.p = c + u * half;
        left_->p = c - u * half;
      });
      hold(1.0);
    }
    open_fingers(true);
    wait_until([&] { return mode() != Mode::Scaling; });
  }

  TrialSpec spec_;
  ActorParams actor_;
  Technique technique_;
  EngineConfig cfg_;
  ViewFrame head_;
  Vec3 eye_;
  TrialRunner runner_;
  Rng rng_;
  std::array<double, 2> tremor_phase_{0.0, 0.0};

  HandPose right_;
  std::optional<HandPose> left_;
  std::vector<std::pair<double, Vec3>> history_;
  long frame_index_ = 0;
  Trace trace_;
};

}  // namespace

double planned_initial_input(Technique technique, double target_scale, const EngineConfig& cfg) {
  const ClampRange& r = cfg.clamps.for_kind(control_kind(technique));
  const double mid = 0.5 * (r.min + r.max);
  if (technique == Technique::PushPullDepth || technique == Technique::Bimanual) {
    // I_0 and k * I_0 average to the midpoint.
    return 2.0 * mid / (1.0 + target_scale);
  }
  return mid;
}

Trace synthesize_trial(const TrialSpec& spec, const ActorParams& actor, Technique technique,
                       const EngineConfig& cfg) {
  if (!spec.valid()) throw Error("invalid trial spec");
  cfg.validate();
  Actor a(spec, actor, technique, cfg);
  return a.run();
}

}  // namespace gazescale
