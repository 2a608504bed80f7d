#include <doctest.h>

#include <cmath>
#include <random>

#include "gazescale/errors.hpp"
#include "gazescale/geometry.hpp"
#include "support.hpp"

using namespace gazescale;
using doctest::Approx;

namespace {

ViewFrame single_eye_frame() {
  ViewFrame f = ViewFrame::looking_forward({});
  f.left_eye = f.right_eye = f.head_origin;
  return f;
}

}  // namespace

TEST_CASE("project_point examples") {
  const ViewFrame f = ViewFrame::looking_forward({});
  const Vec3 eye = f.left_eye;
  Point2D p = project_point(eye + f.forward, f, eye);
  CHECK(p.u == Approx(0.0));
  CHECK(p.v == Approx(0.0));
  p = project_point(eye + f.forward + f.right() * 0.5, f, eye);
  CHECK(p.u == Approx(0.5));
  CHECK(p.v == Approx(0.0));
  p = project_point(eye + f.forward * 2.0 + f.up, f, eye);
  CHECK(p.u == Approx(0.0));
  CHECK(p.v == Approx(0.5));
}

TEST_CASE("project_point rejects points at or behind the eye plane") {
  const ViewFrame f = ViewFrame::looking_forward({});
  CHECK_THROWS_AS(project_point(f.head_origin - f.forward, f, f.head_origin), PointBehindViewPlane);
  CHECK_THROWS_AS(project_point(f.head_origin + f.up, f, f.head_origin), PointBehindViewPlane);
}

TEST_CASE("project_point is homogeneous along the eye ray") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const ViewFrame f = ViewFrame::looking_forward({0.3, -0.2, 0.1});
  for (int i = 0; i < 200; ++i) {
    const Vec3 p{u(rng), u(rng), 1.5 + u(rng)};
    const double k = 0.2 + 3.0 * (u(rng) + 1.0);
    const Vec3 q = f.left_eye + (p - f.left_eye) * k;
    const Point2D a = project_point(p, f, f.left_eye);
    const Point2D b = project_point(q, f, f.left_eye);
    CHECK(a.u == Approx(b.u).epsilon(1e-12));
    CHECK(a.v == Approx(b.v).epsilon(1e-12));
  }
}

TEST_CASE("stereoscopic_view_rect examples") {
  SUBCASE("coincident tips and eyes give a zero-area rect") {
    const ViewFrame f = single_eye_frame();
    const Rect2D r = stereoscopic_view_rect({0.1, 0.1, 0.5}, {0.1, 0.1, 0.5}, f);
    CHECK(r.area() == 0.0);
  }
  SUBCASE("tips symmetric about the forward axis center the rect") {
    const ViewFrame f = single_eye_frame();
    const Rect2D r = stereoscopic_view_rect({-0.05, -0.02, 0.5}, {0.05, 0.02, 0.5}, f);
    CHECK(0.5 * (r.u_min + r.u_max) == Approx(0.0));
    CHECK(0.5 * (r.v_min + r.v_max) == Approx(0.0));
  }
  SUBCASE("brute force over the four eye and fingertip pairs") {
    ViewFrame f = ViewFrame::looking_forward({});
    f.left_eye = {-0.03, 0.0, 0.0};
    f.right_eye = {0.03, 0.0, 0.0};
    const Vec3 a{-0.05, 0.0, 0.5};
    const Vec3 b{0.05, 0.0, 0.5};
    // Hand-derived: u = (x - eye_x) / z for each pair.
    const Rect2D r = stereoscopic_view_rect(a, b, f);
    CHECK(r.u_min == Approx((-0.05 - 0.03) / 0.5));
    CHECK(r.u_max == Approx((0.05 + 0.03) / 0.5));
    CHECK(r.v_min == Approx(0.0));
    CHECK(r.v_max == Approx(0.0));
  }
}

TEST_CASE("stereoscopic_view_rect is symmetric in tips and eyes") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int i = 0; i < 100; ++i) {
    ViewFrame f = ViewFrame::looking_forward({});
    const Vec3 a{u(rng), u(rng), 0.4 + u(rng)};
    const Vec3 b{u(rng), u(rng), 0.4 + u(rng)};
    const Rect2D r1 = stereoscopic_view_rect(a, b, f);
    const Rect2D r2 = stereoscopic_view_rect(b, a, f);
    std::swap(f.left_eye, f.right_eye);
    const Rect2D r3 = stereoscopic_view_rect(a, b, f);
    for (const Rect2D& r : {r2, r3}) {
      CHECK(r.u_min == r1.u_min);
      CHECK(r.u_max == r1.u_max);
      CHECK(r.v_min == r1.v_min);
      CHECK(r.v_max == r1.v_max);
    }
  }
}

TEST_CASE("project_sphere examples") {
  const ViewFrame f = single_eye_frame();
  SUBCASE("small-angle limit") {
    const Disc2D d = project_sphere({{0, 0, 2}, 1e-6}, f);
    CHECK(d.radius == Approx(0.5e-6).epsilon(1e-9));
    CHECK(d.center.u == Approx(0.0));
  }
  SUBCASE("d = 2, r = 1 gives 1/sqrt(3)") {
    const Disc2D d = project_sphere({{0, 0, 2}, 1.0}, f);
    CHECK(d.radius == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  }
  SUBCASE("cross-check against tangent rays found by bisection") {
    // Largest off-axis angle whose ray still meets the sphere.
    const Vec3 c{0, 0, 2};
    const double r = 1.0;
    auto hits = [&](double ang) {
      const Vec3 dir{std::sin(ang), 0.0, std::cos(ang)};
      const double tca = dot(c, dir);
      return tca > 0 && dot(c, c) - tca * tca <= r * r;
    };
    double lo = 0.0, hi = 1.5;
    for (int i = 0; i < 200; ++i) (hits(0.5 * (lo + hi)) ? lo : hi) = 0.5 * (lo + hi);
    CHECK(project_sphere({c, r}, f).radius == Approx(std::tan(lo)).epsilon(1e-9));
  }
  SUBCASE("sphere behind or around the viewer") {
    CHECK_THROWS_AS(project_sphere({{0, 0, -2}, 0.5}, f), PointBehindViewPlane);
    CHECK_THROWS_AS(project_sphere({{0, 0, 0.2}, 0.5}, f), SphereEnclosesViewer);
  }
}

TEST_CASE("disc polygon has the disc's area") {
  for (int n : {8, 16, 64, 256}) {
    const Disc2D d{{0.3, -0.1}, 0.7};
    CHECK(shoelace_area(disc_polygon(d, n)) == Approx(d.area()).epsilon(1e-12));
  }
}

TEST_CASE("clip_to_rect and shoelace on a square") {
  Polygon2D sq{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
  CHECK(shoelace_area(sq) == Approx(4.0));
  const Polygon2D c = clip_to_rect(sq, {1, 3, 1, 3});
  CHECK(shoelace_area(c) == Approx(1.0));
  CHECK(clip_to_rect(sq, {5, 6, 5, 6}).vertices.empty());
}

TEST_CASE("disc_rect_intersection_area examples") {
  SUBCASE("disc inside rect") {
    const Disc2D d{{0, 0}, 0.5};
    CHECK(disc_rect_intersection_area({-1, 1, -1, 1}, d, 64) == Approx(d.area()).epsilon(0.005));
  }
  SUBCASE("disjoint") {
    CHECK(disc_rect_intersection_area({2, 3, 2, 3}, {{0, 0}, 1.0}, 64) == 0.0);
  }
  SUBCASE("unit disc on the corner of a large rect is a quarter disc") {
    const Rect2D rect{0, 10, 0, 10};
    const Disc2D disc{{0, 0}, 1.0};
    const double area = disc_rect_intersection_area(rect, disc, 64);
    CHECK(area == Approx(kPi / 4.0).epsilon(0.01));
    const auto mc = testing::monte_carlo_overlap(rect, disc, 1000000, 99);
    CHECK(area == Approx(mc.intersection).epsilon(0.01));
  }
}

TEST_CASE("disc_rect_intersection_area matches the sampling oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    const Disc2D disc{{0.5 * u(rng), 0.5 * u(rng)}, 0.2 + 0.3 * (u(rng) + 1.0)};
    const double w = 0.2 + (u(rng) + 1.0);
    const double h = 0.2 + (u(rng) + 1.0);
    const double cu = disc.center.u + 0.6 * disc.radius * u(rng);
    const double cv = disc.center.v + 0.6 * disc.radius * u(rng);
    const Rect2D rect{cu - w / 2, cu + w / 2, cv - h / 2, cv + h / 2};
    const auto mc = testing::monte_carlo_overlap(rect, disc, 400000, 7 + i);
    CHECK(disc_rect_intersection_area(rect, disc, 64) == Approx(mc.intersection).epsilon(0.01));
  }
}

TEST_CASE("overlap_ratios examples") {
  SUBCASE("disc inside rect covers all of itself") {
    const OverlapRatios r = overlap_ratios({-2, 2, -2, 2}, {{0, 0}, 1.0});
    CHECK(r.object_covered == Approx(1.0).epsilon(1e-9));
    CHECK(r.view_area_covered == Approx(kPi / 16.0).epsilon(1e-9));
  }
  SUBCASE("disjoint") {
    const OverlapRatios r = overlap_ratios({2, 3, 2, 3}, {{0, 0}, 1.0});
    CHECK(r.view_area_covered == 0.0);
    CHECK(r.object_covered == 0.0);
  }
  SUBCASE("quarter disc in a rect of twice its area gives (0.5, 0.25)") {
    const double side = std::sqrt(kPi / 2.0);  // > 1, so the whole quarter fits
    const Rect2D rect{0, side, 0, side};
    const Disc2D disc{{0, 0}, 1.0};
    const OverlapRatios r = overlap_ratios(rect, disc);
    CHECK(r.view_area_covered == Approx(0.5).epsilon(0.01));
    CHECK(r.object_covered == Approx(0.25).epsilon(0.01));
    const auto mc = testing::monte_carlo_overlap(rect, disc, 1000000, 3);
    CHECK(mc.intersection / rect.area() == Approx(0.5).epsilon(0.01));
  }
  SUBCASE("degenerate inputs") {
    CHECK_THROWS_AS(overlap_ratios({0, 0, 0, 1}, {{0, 0}, 1.0}), DegenerateRegion);
    CHECK_THROWS_AS(overlap_ratios({0, 1, 0, 1}, {{0, 0}, 0.0}), DegenerateRegion);
  }
}

TEST_CASE("overlap_ratios stay in [0, 1] and the intersection is bounded by both areas") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Disc2D disc{{u(rng), u(rng)}, 0.05 + (u(rng) + 1.0)};
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const Rect2D rect{std::min(a, b), std::max(a, b) + 1e-3, std::min(c, d), std::max(c, d) + 1e-3};
    const OverlapRatios r = overlap_ratios(rect, disc);
    CHECK(r.view_area_covered >= 0.0);
    CHECK(r.view_area_covered <= 1.0);
    CHECK(r.object_covered >= 0.0);
    CHECK(r.object_covered <= 1.0);
    const double inter = disc_rect_intersection_area(rect, disc);
    CHECK(inter <= std::min(rect.area(), disc.area()) * (1.0 + 1e-12));
  }
}

TEST_CASE("angular_dispersion examples") {
  const Ray gaze{{0, 0, 0}, {0, 0, 1}};
  CHECK(angular_dispersion(gaze, {0, 0, 0.4}) == Approx(0.0));
  CHECK(angular_dispersion(gaze, {0.3, 0, 0}) == Approx(90.0));
  CHECK(angular_dispersion(gaze, {std::tan(deg_to_rad(15.0)), 0, 1}) == Approx(15.0).epsilon(1e-12));
  CHECK_THROWS_AS(angular_dispersion(gaze, {0, 0, 0}), DegenerateVector);
}

TEST_CASE("angular_dispersion is rotation invariant") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Ray gaze{{u(rng), u(rng), u(rng)}, Vec3{u(rng), u(rng), u(rng) + 2.0}.normalized()};
    const Vec3 hand{u(rng), u(rng), u(rng) + 1.5};
    const Vec3 axis{u(rng), u(rng), u(rng) + 0.1};
    const double ang = 3.0 * u(rng);
    const Ray g2{testing::rotate(gaze.origin, axis, ang), testing::rotate(gaze.direction, axis, ang)};
    const double before = angular_dispersion(gaze, hand);
    const double after = angular_dispersion(g2, testing::rotate(hand, axis, ang));
    CHECK(std::abs(before - after) < 1e-9);
  }
}

TEST_CASE("finger_angle examples and properties") {
  const Vec3 o{0, 0, 0};
  CHECK(finger_angle(o, {0.1, 0, 0.5}, {0.1, 0, 0.5}) == Approx(0.0));
  CHECK(finger_angle(o, {-0.2, 0, 0.2}, {0.2, 0, 0.2}) == Approx(90.0));
  CHECK(finger_angle(o, {-0.05, 0, 0.5}, {0.05, 0, 0.5}) ==
        Approx(rad_to_deg(2.0 * std::atan(0.1))).epsilon(1e-12));
  CHECK(finger_angle(o, {-0.05, 0, 0.5}, {0.05, 0, 0.5}) == Approx(11.42).epsilon(1e-3));

  // Invariant to scaling both tips away from the eye; increasing in span at fixed depth.
  const double a1 = finger_angle(o, {-0.03, 0.01, 0.4}, {0.04, 0.0, 0.4});
  const double a2 = finger_angle(o, {-0.06, 0.02, 0.8}, {0.08, 0.0, 0.8});
  CHECK(a1 == Approx(a2).epsilon(1e-12));
  double prev = 0.0;
  for (double s = 0.01; s < 0.3; s += 0.01) {
    const double a = finger_angle(o, {-s / 2, 0, 0.4}, {s / 2, 0, 0.4});
    CHECK(a > prev);
    prev = a;
  }
}

TEST_CASE("span and hand_depth examples") {
  CHECK(span({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(span({0, 0, 0}, {0.15, 0, 0}) == Approx(0.15));
  CHECK(span({0, 0, 0}, {0.03, 0.04, 0}) == Approx(0.05));

  const ViewFrame f = ViewFrame::looking_forward({0.1, 1.6, -0.3});
  CHECK(hand_depth(f, f.head_origin) == 0.0);
  CHECK(hand_depth(f, f.head_origin + f.forward * 0.5) == Approx(0.5));
  CHECK(hand_depth(f, f.head_origin + f.forward * 0.3 + f.up) == Approx(0.3));
  CHECK(hand_depth(f, f.head_origin - f.forward * 0.3) == 0.0);
  // Perpendicular displacement does not change depth.
  const Vec3 h = f.head_origin + f.forward * 0.27;
  CHECK(hand_depth(f, h + f.right() * 0.4 - f.up * 0.2) == Approx(hand_depth(f, h)).epsilon(1e-12));
}

TEST_CASE("gaze_hits_sphere examples") {
  const Sphere s{{0, 0, 2}, 0.25};
  CHECK(gaze_hits_sphere({{0, 0, 0}, {0, 0, 1}}, s));
  CHECK_FALSE(gaze_hits_sphere({{0, 0, 0}, {0, 0, -1}}, s));
  // Tangent ray tilted by exactly the inflation tolerance.
  const double edge = std::asin(0.25 / 2.0) + deg_to_rad(kDefaultGazeToleranceDeg);
  CHECK(gaze_hits_sphere({{0, 0, 0}, {std::sin(edge), 0, std::cos(edge)}}, s));
  const double beyond = edge + deg_to_rad(0.01);
  CHECK_FALSE(gaze_hits_sphere({{0, 0, 0}, {std::sin(beyond), 0, std::cos(beyond)}}, s));
  CHECK(gaze_hits_sphere({{0, 0, 2.1}, {0, 1, 0}}, s));  // from inside
}
