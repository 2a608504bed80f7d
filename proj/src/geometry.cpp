#include "gazescale/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "gazescale/errors.hpp"

namespace gazescale {

namespace {

constexpr double kMinDepth = 1e-6;
constexpr double kMinLength = 1e-6;

}  // namespace

bool ViewFrame::valid() const {
  constexpr double tol = 1e-9;
  const Vec3 r = right();
  if (std::abs(forward.norm() - 1.0) > tol || std::abs(up.norm() - 1.0) > tol) {
    return false;
  }
  if (std::abs(dot(forward, up)) > tol || std::abs(r.norm() - 1.0) > tol) {
    return false;
  }
  return distance(left_eye, head_origin) <= 0.2 && distance(right_eye, head_origin) <= 0.2 &&
         head_origin.finite() && left_eye.finite() && right_eye.finite();
}

ViewFrame ViewFrame::looking_forward(const Vec3& origin, double ipd) {
  ViewFrame f;
  f.head_origin = origin;
  f.forward = {0.0, 0.0, 1.0};
  f.up = {0.0, 1.0, 0.0};
  f.left_eye = origin - Vec3{ipd * 0.5, 0.0, 0.0};
  f.right_eye = origin + Vec3{ipd * 0.5, 0.0, 0.0};
  return f;
}

Point2D project_point(const Vec3& p, const ViewFrame& frame, const Vec3& eye) {
  const Vec3 d = p - eye;
  const double depth = dot(d, frame.forward);
  if (!(depth > kMinDepth)) {
    throw PointBehindViewPlane();
  }
  return {dot(d, frame.right()) / depth, dot(d, frame.up) / depth};
}

Rect2D stereoscopic_view_rect(const Vec3& thumb_tip, const Vec3& index_tip, const ViewFrame& frame) {
  const std::array<Point2D, 4> pts = {
      project_point(thumb_tip, frame, frame.left_eye),
      project_point(thumb_tip, frame, frame.right_eye),
      project_point(index_tip, frame, frame.left_eye),
      project_point(index_tip, frame, frame.right_eye),
  };
  Rect2D r{pts[0].u, pts[0].u, pts[0].v, pts[0].v};
  for (const auto& p : pts) {
    r.u_min = std::min(r.u_min, p.u);
    r.u_max = std::max(r.u_max, p.u);
    r.v_min = std::min(r.v_min, p.v);
    r.v_max = std::max(r.v_max, p.v);
  }
  return r;
}

Disc2D project_sphere(const Sphere& s, const ViewFrame& frame) {
  const Vec3 eye = frame.cyclopean_eye();
  const Vec3 d = s.center - eye;
  if (d.norm() <= s.radius) {
    throw SphereEnclosesViewer();
  }
  const double d_fwd = dot(d, frame.forward);
  // The silhouette must lie entirely in front of the eye to map onto the plane.
  if (!(d_fwd > kMinDepth) || d_fwd <= s.radius) {
    throw PointBehindViewPlane();
  }
  Disc2D disc;
  disc.center = project_point(s.center, frame, eye);
  disc.radius = s.radius / std::sqrt(d_fwd * d_fwd - s.radius * s.radius);
  return disc;
}

Polygon2D disc_polygon(const Disc2D& disc, int n_segments) {
  const double n = static_cast<double>(n_segments);
  // Scale the circumradius so the polygon area equals the disc area.
  const double k = std::sqrt(2.0 * kPi / (n * std::sin(2.0 * kPi / n)));
  const double r = disc.radius * k;
  Polygon2D poly;
  poly.vertices.reserve(static_cast<std::size_t>(n_segments));
  for (int i = 0; i < n_segments; ++i) {
    const double a = 2.0 * kPi * static_cast<double>(i) / n;
    poly.vertices.push_back({disc.center.u + r * std::cos(a), disc.center.v + r * std::sin(a)});
  }
  return poly;
}

namespace {

// One Sutherland-Hodgman pass against the half-plane sign * (coord - bound) >= 0.
template <typename Inside, typename Intersect>
std::vector<Point2D> clip_pass(const std::vector<Point2D>& in, Inside inside, Intersect intersect) {
  std::vector<Point2D> out;
  if (in.empty()) {
    return out;
  }
  out.reserve(in.size() + 4);
  Point2D prev = in.back();
  bool prev_in = inside(prev);
  for (const auto& cur : in) {
    const bool cur_in = inside(cur);
    if (cur_in) {
      if (!prev_in) {
        out.push_back(intersect(prev, cur));
      }
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(intersect(prev, cur));
    }
    prev = cur;
    prev_in = cur_in;
  }
  return out;
}

Point2D lerp_at_u(const Point2D& a, const Point2D& b, double u) {
  const double t = (u - a.u) / (b.u - a.u);
  return {u, a.v + t * (b.v - a.v)};
}

Point2D lerp_at_v(const Point2D& a, const Point2D& b, double v) {
  const double t = (v - a.v) / (b.v - a.v);
  return {a.u + t * (b.u - a.u), v};
}

}  // namespace

Polygon2D clip_to_rect(const Polygon2D& poly, const Rect2D& rect) {
  std::vector<Point2D> pts = poly.vertices;
  pts = clip_pass(
      pts, [&](const Point2D& p) { return p.u >= rect.u_min; },
      [&](const Point2D& a, const Point2D& b) { return lerp_at_u(a, b, rect.u_min); });
  pts = clip_pass(
      pts, [&](const Point2D& p) { return p.u <= rect.u_max; },
      [&](const Point2D& a, const Point2D& b) { return lerp_at_u(a, b, rect.u_max); });
  pts = clip_pass(
      pts, [&](const Point2D& p) { return p.v >= rect.v_min; },
      [&](const Point2D& a, const Point2D& b) { return lerp_at_v(a, b, rect.v_min); });
  pts = clip_pass(
      pts, [&](const Point2D& p) { return p.v <= rect.v_max; },
      [&](const Point2D& a, const Point2D& b) { return lerp_at_v(a, b, rect.v_max); });
  return {std::move(pts)};
}

double shoelace_area(const Polygon2D& poly) {
  const auto& v = poly.vertices;
  if (v.size() < 3) {
    return 0.0;
  }
  double twice = 0.0;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    twice += v[j].u * v[i].v - v[i].u * v[j].v;
  }
  return std::abs(twice) * 0.5;
}

double disc_rect_intersection_area(const Rect2D& rect, const Disc2D& disc, int n_segments) {
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0) || !(disc.radius > 0.0)) {
    return 0.0;
  }
  n_segments = std::max(n_segments, 8);
  // Quick reject on bounding boxes.
  const double reach = disc.radius * 1.1;
  if (disc.center.u + reach < rect.u_min || disc.center.u - reach > rect.u_max ||
      disc.center.v + reach < rect.v_min || disc.center.v - reach > rect.v_max) {
    return 0.0;
  }
  return shoelace_area(clip_to_rect(disc_polygon(disc, n_segments), rect));
}

OverlapRatios overlap_ratios(const Rect2D& rect, const Disc2D& disc, int n_segments) {
  const double rect_area = rect.area();
  if (!(rect_area > 0.0) || !(disc.radius > 0.0)) {
    throw DegenerateRegion();
  }
  const double inter = disc_rect_intersection_area(rect, disc, n_segments);
  return {std::clamp(inter / rect_area, 0.0, 1.0), std::clamp(inter / disc.area(), 0.0, 1.0)};
}

double angular_dispersion(const Ray& gaze, const Vec3& hand_pos) {
  const Vec3 to_hand = hand_pos - gaze.origin;
  if (to_hand.norm() <= kMinLength) {
    throw DegenerateVector();
  }
  return rad_to_deg(angle_between(gaze.direction, to_hand));
}

double finger_angle(const Vec3& gaze_origin, const Vec3& thumb_tip, const Vec3& index_tip) {
  const Vec3 a = thumb_tip - gaze_origin;
  const Vec3 b = index_tip - gaze_origin;
  if (a.norm() <= kMinLength || b.norm() <= kMinLength) {
    throw DegenerateVector();
  }
  return rad_to_deg(angle_between(a, b));
}

double span(const Vec3& thumb_tip, const Vec3& index_tip) { return distance(thumb_tip, index_tip); }

double hand_depth(const ViewFrame& frame, const Vec3& hand_pos) {
  return std::max(0.0, dot(hand_pos - frame.head_origin, frame.forward));
}

bool gaze_hits_sphere(const Ray& gaze, const Sphere& s, double tolerance_deg) {
  const Vec3 to_center = s.center - gaze.origin;
  const double dist = to_center.norm();
  if (dist <= s.radius) {
    return true;
  }
  const double half_angle = rad_to_deg(std::asin(s.radius / dist));
  const double off_axis = rad_to_deg(angle_between(gaze.direction, to_center));
  // 1e-9 deg slack so an analytically constructed boundary ray counts as a hit.
  return off_axis <= half_angle + tolerance_deg + 1e-9;
}

}  // namespace gazescale
