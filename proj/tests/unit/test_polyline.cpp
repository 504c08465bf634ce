#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vortgrad/error.hpp"
#include "vortgrad/polyline.hpp"

using namespace vortgrad;
using std::numbers::pi;

TEST_SUITE("polyline") {

TEST_CASE("zero velocity leaves the polyline unchanged") {
  const auto src = VelocitySource::function([](Vec2, double) { return Vec2{}; });
  const Polyline p = circle_polyline({1, 1}, 0.1, 16);
  const auto r = advect_polyline(src, p, 2.0);
  REQUIRE(r.image.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(r.image[i].x == p[i].x);
    CHECK(r.image[i].y == p[i].y);
  }
}

TEST_CASE("rigid rotation preserves lengths over one revolution") {
  const auto src = VelocitySource::function([](Vec2 q, double) { return Vec2{-(q.y - pi), q.x - pi}; });
  const Polyline seg = chord_polyline({pi + 0.5, pi + 0.2}, 1.0, 9);
  const auto r = advect_polyline(src, seg, 2 * pi, {1e-3});
  CHECK(polyline_length(r.image) == doctest::Approx(polyline_length(seg)).epsilon(1e-8));
  for (std::size_t i = 0; i < seg.size(); ++i) {
    CHECK(r.image[i].x == doctest::Approx(seg[i].x).epsilon(1e-8));
    CHECK(r.image[i].y == doctest::Approx(seg[i].y).epsilon(1e-8));
  }
}

TEST_CASE("geometry of the initial configuration") {
  const double g = 0.01;
  const std::size_t N = 64;
  const Polyline c = circle_polyline({0.5, 0.5}, g, N);
  const Polyline l = chord_polyline({0.5, 0.5}, g, 17);
  CHECK(polyline_length(l) == doctest::Approx(g).epsilon(1e-12));
  CHECK(polygon_area(c) == doctest::Approx(0.5 * N * std::sin(2 * pi / N) * g * g).epsilon(1e-10));
  const auto st = stretch_and_thickness(l, c);
  // The chord end sits on the diameter; the inscribed edge is at distance
  // (gamma / 2) cos(pi / N) from it.
  CHECK(st.d == doctest::Approx(0.5 * g * std::cos(pi / N)).epsilon(1e-10));
  CHECK(st.area_product <= pi * g * g);
  CHECK_THROWS_AS(stretch_and_thickness({{0, 0}}, c), InvalidInput);
}

TEST_CASE("exact cross advection keeps area and obeys the area bound") {
  const AlephRegion R{1e-9, 0.5};
  const auto src = VelocitySource::model({}, {}, R);
  const double g = 1e-3;
  const Vec2 c{1.5e-3, 0.4};
  AdvectOptions o{1e-4, 0.0, 1 << 14, true};
  const auto circ = advect_polyline(src, circle_polyline(c, g, 64), 0.5, o);
  CHECK_FALSE(circ.any_exit());
  CHECK(polygon_area(circ.image) == doctest::Approx(polygon_area(circ.initial)).epsilon(1e-6));
  o.closed = false;
  const auto seg = advect_polyline(src, chord_polyline(c, g, 33), 0.5, o);
  const auto st = stretch_and_thickness(seg.image, circ.image);
  CHECK(st.area_product <= 1.1 * pi * g * g);
  CHECK(st.L > g);
}

TEST_CASE("leading variant grows area like e^t") {
  const CrossFieldVariant lead{VariantKind::Leading, 0.5, 1.0};
  const auto src = VelocitySource::model(lead, {}, {1e-9, 0.5});
  const double g = 0.01;
  const auto r = advect_polyline(src, circle_polyline({0.05, 0.3}, g, 64), 1.0,
                                 {1e-3, 0.2 * g, 1 << 14, true});
  CHECK(polygon_area(r.image) == doctest::Approx(polygon_area(r.initial) * std::exp(1.0)).epsilon(1e-3));
  CHECK(polygon_area(r.image) == doctest::Approx(pi * g * g * std::exp(1.0)).epsilon(0.02));
}

TEST_CASE("refinement inserts Lagrangian midpoints") {
  const auto shear = VelocitySource::function([](Vec2 q, double) { return Vec2{q.y * 5.0, 0.0}; });
  const Polyline p = circle_polyline({1, 1}, 0.2, 16);
  const auto r = advect_polyline(shear, p, 1.0, {1e-3, 0.05, 4096, true});
  CHECK(r.image.size() > p.size());
  for (std::size_t i = 0; i < r.image.size(); ++i) {
    const auto& a = r.image[i];
    const auto& b = r.image[(i + 1) % r.image.size()];
    CHECK(std::hypot(a.x - b.x, a.y - b.y) <= 0.05);
  }
  // Shear preserves area exactly, and so does the polygon on refined vertices.
  CHECK(polygon_area(r.image) == doctest::Approx(polygon_area(r.initial)).epsilon(1e-4));
}

TEST_CASE("snapshot source interpolates in space and time") {
  Grid g(32);
  auto constant = [&](double u, double v) {
    return VelocityField{ScalarField::sample(g, [u](double, double) { return u; }),
                         ScalarField::sample(g, [v](double, double) { return v; })};
  };
  SnapshotSequence seq;
  seq.push(0.0, constant(1.0, 0.0));
  seq.push(1.0, constant(3.0, -2.0));
  const Vec2 mid = seq({0.3, 6.1}, 0.5);
  CHECK(mid.x == doctest::Approx(2.0));
  CHECK(mid.y == doctest::Approx(-1.0));
  CHECK_THROWS_AS(seq({0.3, 0.3}, 1.5), InvalidInput);
  // Displacement = int_0^1 (1 + 2t) dt = 2 in x, -1 in y.
  const auto r = advect_polyline(VelocitySource::snapshots(seq), {{1.0, 1.0}}, 1.0, {0.01});
  CHECK(r.image[0].x == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.image[0].y == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  // A smooth field is reproduced to second order by bilinear interpolation.
  ScalarField s = ScalarField::sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); });
  CHECK(bilinear(s, 1.0, 2.0) == doctest::Approx(std::sin(1.0) * std::cos(2.0)).epsilon(0.01));
  CHECK(bilinear(s, 1.0 + 2 * pi, 2.0 - 2 * pi) == doctest::Approx(bilinear(s, 1.0, 2.0)).epsilon(1e-12));
}

}
