#pragma once

// Test-side helpers. Nothing here calls into the library's geometry, so the
// oracles stay independent of the code under test.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "gazescale/frame.hpp"
#include "gazescale/geometry.hpp"
#include "gazescale/trace.hpp"

namespace testing {

using gazescale::Vec3;

struct McArea {
  double intersection = 0.0;
  double disc = 0.0;
};

// Uniform sampling over the disc's bounding square.
inline McArea monte_carlo_overlap(const gazescale::Rect2D& rect, const gazescale::Disc2D& disc,
                                  std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(disc.center.u - disc.radius, disc.center.u + disc.radius);
  std::uniform_real_distribution<double> uy(disc.center.v - disc.radius, disc.center.v + disc.radius);
  std::size_t in_disc = 0;
  std::size_t in_both = 0;
  const double r2 = disc.radius * disc.radius;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    const double dx = x - disc.center.u;
    const double dy = y - disc.center.v;
    if (dx * dx + dy * dy > r2) continue;
    ++in_disc;
    if (x >= rect.u_min && x <= rect.u_max && y >= rect.v_min && y <= rect.v_max) ++in_both;
  }
  const double box = 4.0 * r2;
  return {box * static_cast<double>(in_both) / static_cast<double>(samples),
          box * static_cast<double>(in_disc) / static_cast<double>(samples)};
}

// Rotation about a unit axis (Rodrigues).
inline Vec3 rotate(const Vec3& v, const Vec3& axis, double angle) {
  const Vec3 k = axis.normalized();
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + gazescale::cross(k, v) * s + k * (gazescale::dot(k, v) * (1.0 - c));
}

// Head at the origin looking along +z.
inline gazescale::Frame make_frame(double t, const Vec3& gaze_target) {
  gazescale::Frame f;
  f.t = t;
  f.head = gazescale::ViewFrame::looking_forward({});
  f.gaze.origin = f.head.cyclopean_eye();
  f.gaze.direction = (gaze_target - f.gaze.origin).normalized();
  return f;
}

// Fingertips symmetric about `p` along x, hand position at `p`.
inline gazescale::HandSample hand_at(const Vec3& p, double span) {
  const Vec3 half{0.5 * span, 0.0, 0.0};
  return {p - half, p + half, p};
}

// Arbitrary but schema-valid trace: rotated heads, awkward doubles, dropped hands.
inline gazescale::Trace random_trace(std::uint64_t seed) {
  using namespace gazescale;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, 40);
  auto vec = [&](double s) { return Vec3{s * u(rng), s * u(rng), s * u(rng)}; };
  Trace tr;
  tr.meta.frame_rate_hz = 30.0 + 100.0 * (u(rng) + 1.0);
  tr.meta.seed = rng();
  if (u(rng) > -0.6) tr.meta.technique = kAllTechniques[rng() % 5];
  tr.meta.trial_spec.target_direction = kAllDirections[rng() % 4];
  tr.meta.trial_spec.target_scale = kTargetScales[rng() % 4];
  tr.meta.trial_spec.object_depth = 1.0 + u(rng) * 0.5;
  tr.meta.actor.positional_noise_sd = 0.01 * (u(rng) + 1.0);
  tr.meta.actor.seed = rng();
  const int n = count(rng);
  double t = u(rng) * 100.0;
  for (int i = 0; i < n; ++i) {
    t += 1e-3 + (u(rng) + 1.0) * 0.02;
    Frame f;
    f.t = t;
    const Vec3 axis = Vec3{u(rng), u(rng), u(rng)} + Vec3{0, 0, 1e-3};
    const double ang = 3.0 * u(rng);
    ViewFrame h = ViewFrame::looking_forward(vec(2.0), 0.05 + 0.02 * (u(rng) + 1.0));
    const Vec3 o = h.head_origin;
    h.forward = rotate(h.forward, axis, ang);
    h.up = rotate(h.up, axis, ang);
    h.left_eye = o + rotate(h.left_eye - o, axis, ang);
    h.right_eye = o + rotate(h.right_eye - o, axis, ang);
    f.head = h;
    f.gaze.origin = h.cyclopean_eye() + vec(1e-3);
    f.gaze.direction = (vec(1.0) + Vec3{0, 0, 2}).normalized();
    if (u(rng) > -0.5) f.left = HandSample{vec(0.5), vec(0.5), vec(0.5)};
    if (u(rng) > -0.5) f.right = HandSample{vec(0.5), vec(0.5), vec(0.5)};
    tr.frames.push_back(f);
  }
  return tr;
}

inline bool same_frame(const gazescale::Frame& a, const gazescale::Frame& b) {
  return a.t == b.t && a.head.head_origin == b.head.head_origin && a.head.forward == b.head.forward &&
         a.head.up == b.head.up && a.head.left_eye == b.head.left_eye &&
         a.head.right_eye == b.head.right_eye && a.gaze.origin == b.gaze.origin &&
         a.gaze.direction == b.gaze.direction && a.left == b.left && a.right == b.right;
}

inline bool same_trace(const gazescale::Trace& a, const gazescale::Trace& b) {
  const auto& m = a.meta;
  const auto& n = b.meta;
  if (m.schema_version != n.schema_version || m.frame_rate_hz != n.frame_rate_hz ||
      m.seed != n.seed || m.technique != n.technique)
    return false;
  const auto& s = m.trial_spec;
  const auto& r = n.trial_spec;
  if (s.target_direction != r.target_direction || s.target_scale != r.target_scale ||
      s.object_depth != r.object_depth || s.target_offset != r.target_offset ||
      s.object_diameter != r.object_diameter || s.snap_radius != r.snap_radius ||
      s.scale_tolerance != r.scale_tolerance)
    return false;
  const auto& x = m.actor;
  const auto& y = n.actor;
  if (x.movement_duration != y.movement_duration || x.gaze_latency != y.gaze_latency ||
      x.positional_noise_sd != y.positional_noise_sd || x.tremor_frequency != y.tremor_frequency ||
      x.tremor_amplitude != y.tremor_amplitude || x.open_span != y.open_span ||
      x.reach_distance != y.reach_distance || x.seed != y.seed)
    return false;
  if (a.frames.size() != b.frames.size()) return false;
  for (std::size_t i = 0; i < a.frames.size(); ++i)
    if (!same_frame(a.frames[i], b.frames[i])) return false;
  return true;
}

inline std::string temp_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path p = fs::path(GAZESCALE_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

}  // namespace testing
