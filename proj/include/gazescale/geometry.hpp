#pragma once

#include <vector>

#include "gazescale/vec3.hpp"

namespace gazescale {

struct Ray {
  Vec3 origin;
  Vec3 direction;  // unit length
};

/// Head pose plus the two eye origins.
///
/// The basis is (right, up, forward) with right = up x forward. Only forward
/// and up are stored; right is always derived so that a round trip through a
/// trace file reproduces it exactly.
struct ViewFrame {
  Vec3 head_origin;
  Vec3 forward{0.0, 0.0, 1.0};
  Vec3 up{0.0, 1.0, 0.0};
  Vec3 left_eye;
  Vec3 right_eye;

  Vec3 right() const { return cross(up, forward); }
  Vec3 cyclopean_eye() const { return midpoint(left_eye, right_eye); }

  // Orthonormal to 1e-9 and eyes within 0.2 m of the head.
  bool valid() const;

  /// Upright frame at `origin` looking along +z with eyes separated by `ipd` along +x.
  static ViewFrame looking_forward(const Vec3& origin, double ipd = 0.064);
};

struct Point2D {
  double u = 0.0;
  double v = 0.0;
};

struct Rect2D {
  double u_min = 0.0;
  double u_max = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;

  double width() const { return u_max - u_min; }
  double height() const { return v_max - v_min; }
  double area() const { return width() * height(); }
};

struct Disc2D {
  Point2D center;
  double radius = 0.0;

  double area() const { return kPi * radius * radius; }
};

struct Sphere {
  Vec3 center;
  double radius = 0.0;
};

struct OverlapRatios {
  double view_area_covered = 0.0;
  double object_covered = 0.0;
};

inline constexpr int kDefaultDiscSegments = 64;

/// Perspective projection of `p` seen from `eye` onto the plane at unit
/// distance along the head forward axis, in (right, up) coordinates.
/// Throws PointBehindViewPlane unless p lies more than 1e-6 in front of the eye.
Point2D project_point(const Vec3& p, const ViewFrame& frame, const Vec3& eye);

/// Bounding rectangle of both fingertips projected from both eyes.
Rect2D stereoscopic_view_rect(const Vec3& thumb_tip, const Vec3& index_tip, const ViewFrame& frame);

/// Silhouette disc of a sphere seen from the cyclopean eye.
Disc2D project_sphere(const Sphere& s, const ViewFrame& frame);

/// Area of rect intersected with an equal-area regular polygon standing in for the disc.
double disc_rect_intersection_area(const Rect2D& rect, const Disc2D& disc,
                                   int n_segments = kDefaultDiscSegments);

/// Fractions of the rect covered by the disc and of the disc covered by the rect.
/// Throws DegenerateRegion for zero-area inputs.
OverlapRatios overlap_ratios(const Rect2D& rect, const Disc2D& disc,
                             int n_segments = kDefaultDiscSegments);

// Angles below are in degrees.
double angular_dispersion(const Ray& gaze, const Vec3& hand_pos);
double finger_angle(const Vec3& gaze_origin, const Vec3& thumb_tip, const Vec3& index_tip);

double span(const Vec3& thumb_tip, const Vec3& index_tip);

// Forward-axis distance from the head to the hand, floored at zero.
double hand_depth(const ViewFrame& frame, const Vec3& hand_pos);

inline constexpr double kDefaultGazeToleranceDeg = 1.5;

bool gaze_hits_sphere(const Ray& gaze, const Sphere& s,
                      double tolerance_deg = kDefaultGazeToleranceDeg);

// Polygon helpers, exposed for tests.
struct Polygon2D {
  std::vector<Point2D> vertices;
};

Polygon2D disc_polygon(const Disc2D& disc, int n_segments);
Polygon2D clip_to_rect(const Polygon2D& poly, const Rect2D& rect);
double shoelace_area(const Polygon2D& poly);

}  // namespace gazescale
