#include <doctest.h>

#include <cmath>

#include "ascbem/geometry.hpp"

using namespace ascbem;

TEST_CASE("wrap_unit and periodic_diff stay in range") {
  CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
  CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
  CHECK(wrap_unit(-1e-18) < 1.0);
  CHECK(periodic_diff(0.95, 0.05) == doctest::Approx(-0.1));
  CHECK(periodic_diff(0.05, 0.95) == doctest::Approx(0.1));
  CHECK(periodic_distance(0.0, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("circle preset has the expected length, normals and arc-length speed") {
  SceneParams params;
  params.radius = 0.75;
  const Scene s = preset_scene(ScenePreset::circle, params);
  REQUIRE(s.size() == 1);
  CHECK(s.obstacle(0).length() == doctest::Approx(2.0 * kPi * 0.75).epsilon(1e-12));
  for (double t : {0.0, 0.1, 0.37, 0.5, 0.81}) {
    const Vec2 x = s.position({0, t});
    CHECK(norm(x) == doctest::Approx(0.75));
    // Outward: the normal is the radial direction.
    CHECK(dot(s.normal({0, t}), x * (1.0 / 0.75)) == doctest::Approx(1.0));
    CHECK(s.speed({0, t}) == doctest::Approx(2.0 * kPi * 0.75));
  }
}

TEST_CASE("every preset is a valid counter-clockwise scene") {
  for (auto preset : {ScenePreset::circle, ScenePreset::ellipse, ScenePreset::almost_convex,
                      ScenePreset::nonconvex_polygon, ScenePreset::near_inclusion,
                      ScenePreset::two_circles, ScenePreset::three_ellipses}) {
    CAPTURE(to_string(preset));
    const Scene s = preset_scene(preset);
    CHECK(parse_scene_preset(to_string(preset)) == preset);
    for (int p = 0; p < s.size(); ++p) {
      // Signed area by the shoelace formula is positive for CCW curves.
      const auto poly = s.obstacle(p).sample(2000);
      double area = 0.0;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        area += cross(poly[i], poly[(i + 1) % poly.size()]);
      }
      CHECK(area > 0.0);
      // Normal points away from the polygon interior.
      const Vec2 x = s.position({p, 0.3});
      CHECK_FALSE(s.contains(x + s.normal({p, 0.3}) * 1e-3));
      CHECK(s.contains(x - s.normal({p, 0.3}) * 1e-3));
    }
  }
}

TEST_CASE("arc-length presets move at constant speed") {
  const Scene s = preset_scene(ScenePreset::near_inclusion);
  const double L = s.obstacle(0).length();
  for (double t = 0.0; t < 1.0; t += 0.07) {
    CHECK(s.speed({0, t}) == doctest::Approx(L).epsilon(1e-6));
  }
}

TEST_CASE("two circles are radius 1/2 and one diameter apart") {
  const Scene s = preset_scene(ScenePreset::two_circles);
  REQUIRE(s.size() == 2);
  CHECK(s.obstacle(0).length() == doctest::Approx(kPi));
  CHECK(s.min_separation() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s.position({0, 0.75}).y == doctest::Approx(0.5));
  CHECK(s.position({1, 0.25}).y == doctest::Approx(-0.5));
}

TEST_CASE("global parameters round trip") {
  const Scene s = preset_scene(ScenePreset::three_ellipses);
  const GlobalParam g = s.to_local(2.25);
  CHECK(g.obstacle == 2);
  CHECK(g.t == doctest::Approx(0.25));
  CHECK(Scene::to_global(g) == doctest::Approx(2.25));
}

TEST_CASE("invalid scenes and sources are rejected") {
  SceneParams bad;
  bad.radius = -1.0;
  CHECK_THROWS_AS(preset_scene(ScenePreset::circle, bad), GeometryError);
  CHECK_THROWS_AS(parse_scene_preset("square"), GeometryError);
  const Scene s = preset_scene(ScenePreset::circle);
  CHECK_THROWS_AS(IncidentWave::point_source({0.2, 0.1}).validate_against(s), GeometryError);
  CHECK_NOTHROW(IncidentWave::point_source({2.0, 0.0}).validate_against(s));
}

TEST_CASE("incident fields match closed forms") {
  const double k = 7.0;
  const Vec2 x{0.3, -1.2};
  const auto plane = IncidentWave::plane({0.0, 2.0});
  CHECK(std::abs(eval_incident(plane, k, x) - std::exp(Complex(0.0, k * x.y))) < 1e-14);
  // Point source: (i/4) H0(k r) with H0 from J0 + i Y0 at r = 1 for k = 1.
  const auto point = IncidentWave::point_source({0.3, -2.2});
  const Complex u = eval_incident(point, 1.0, x);
  CHECK(u.real() == doctest::Approx(-0.0882569642 / 4.0).epsilon(1e-9));
  CHECK(u.imag() == doctest::Approx(0.7651976866 / 4.0).epsilon(1e-9));
  const auto three = IncidentWave::three_plane(0.0);
  REQUIRE(three.parts().size() == 3);
  Complex sum = 0.0;
  for (const auto& part : three.parts()) {
    const Vec2 d = std::get<PlaneWave>(part).direction;
    sum += Complex(d.x, d.y);
  }
  CHECK(std::abs(sum) < 1e-12);
}
