#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ascbem/analysis.hpp"
#include "oracles.hpp"

using namespace ascbem;

TEST_CASE("metrics round trip with optional fields omitted") {
  MetricsRecord a;
  a.k = 128.0;
  a.n = 1281;
  a.nnz_fraction = 0.123456789012345;
  a.residual_dense = 1.5e-4;
  a.gmres_compressed = 46;
  a.timings["solve"] = 2.0;
  MetricsRecord b;
  b.k = 256.0;
  b.n = 2562;
  b.cond_dense = 7074.9;
  std::stringstream buffer;
  write_metrics(buffer, {a, b});
  CHECK(buffer.str().find("solve") == std::string::npos);
  CHECK(buffer.str().find("cond_compressed") == std::string::npos);
  auto back = read_metrics(buffer);
  REQUIRE(back.size() == 2);
  a.timings.clear();
  CHECK(back[0] == a);
  CHECK(back[1] == b);
  std::stringstream broken("k = 1\nbogus = 3\n");
  CHECK_THROWS(read_metrics(broken));
}

TEST_CASE("timings are written per record") {
  MetricsRecord a;
  a.k = 64.0;
  a.timings["assembly"] = 0.5;
  std::stringstream buffer;
  write_timings(buffer, {a});
  CHECK(buffer.str().find("k = 64") != std::string::npos);
  CHECK(buffer.str().find("assembly = 0.5") != std::string::npos);
}

TEST_CASE("interior samples are seeded, inside and away from the boundary") {
  const Scene scene = preset_scene(ScenePreset::three_ellipses);
  const auto pts = sample_interior_points(scene, 60, 42, 0.05);
  CHECK(pts.size() == 60);
  CHECK(pts == sample_interior_points(scene, 60, 42, 0.05));
  for (Vec2 x : pts) {
    CHECK(scene.contains(x));
    for (int p = 0; p < scene.size(); ++p) {
      for (Vec2 y : scene.obstacle(p).sample(2000)) CHECK(distance(x, y) >= 0.05 - 1e-3);
    }
  }
}

TEST_CASE("Mie density satisfies the boundary condition") {
  // The single-layer potential of the exact density cancels the incident wave
  // on the circle.
  const double k = 7.0;
  const PlaneWave pw{{0.6, -0.8}, 1.0};
  const MieDensity mie({0.0, 0.0}, 1.0, k, pw);
  CHECK_FALSE(mie.truncation_warning());
  const Scene scene = preset_scene(ScenePreset::circle);
  const auto wave = IncidentWave::plane(pw.direction);
  for (double t : {0.0, 0.21, 0.6}) {
    const Vec2 x = scene.position({0, t});
    const std::complex<double> us =
        oracle::single_layer(scene, 0, k, [&](double s) { return mie(s); }, x, t);
    CHECK(std::abs(us + eval_incident(wave, k, x)) < 1e-7);
  }
}

TEST_CASE("boundary residual and density error vanish for the exact density") {
  const Scene scene = preset_scene(ScenePreset::circle);
  const Discretization disc(scene, Wavenumber(8.0), 20.0);
  const auto wave = IncidentWave::plane({1.0, 0.0});
  const MieDensity mie({0.0, 0.0}, 1.0, 8.0, PlaneWave{{1.0, 0.0}, 1.0});
  const CMatrix A = assemble_matrix(disc);
  const CVector c = A.partialPivLu().solve(assemble_rhs(disc, wave));
  CHECK(density_error(disc, c, mie) < 0.01);
  CHECK(boundary_residual(disc, c, wave, 1) < 1e-3);
  CHECK(boundary_residual(disc, c, wave, 1) == boundary_residual(disc, c, wave, 1));
  CHECK(boundary_residual(disc, CVector::Zero(disc.size()), wave, 1) == doctest::Approx(1.0));
  const auto pts = sample_interior_points(scene, 30, 5);
  CHECK(interior_extinction(disc, c, wave, pts) < 1e-3);
}

TEST_CASE("field grids mark points near the boundary") {
  const Scene scene = preset_scene(ScenePreset::circle);
  const Discretization disc(scene, Wavenumber(4.0), 10.0);
  const auto wave = IncidentWave::plane({1.0, 0.0});
  const CVector c = assemble_matrix(disc).partialPivLu().solve(assemble_rhs(disc, wave));
  // The grid line y = 0 passes through (1, 0) on the boundary.
  const FieldGrid grid = total_field_grid(disc, c, wave, 5, 3, -2.0, 2.0, -1.0, 1.0);
  REQUIRE(grid.values.size() == 15);
  CHECK(std::isnan(grid.values[1 * 5 + 3].real()));
  CHECK_FALSE(std::isnan(grid.values[0].real()));
  std::stringstream out;
  write_field_grid(out, grid);
  std::string header;
  std::getline(out, header);
  CHECK(header.rfind("5 3", 0) == 0);
}

TEST_CASE("sparsity statistics") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(3, 3);
  A(0, 0) = 1.0;
  A(1, 0) = 1.0;
  A(1, 2) = 1.0;
  const auto s = sparsity_stats(SparseComplexMatrix::from_dense(A));
  CHECK(s.nnz == 3);
  CHECK(s.fraction == doctest::Approx(3.0 / 9.0));
  CHECK(s.min_row == 0);
  CHECK(s.max_row == 2);
}

TEST_CASE("boundary residual at least halves when ppw doubles") {
  const Scene scene = preset_scene(ScenePreset::circle);
  const auto wave = IncidentWave::plane({1.0, 0.0});
  double residual[2];
  for (int r = 0; r < 2; ++r) {
    const Discretization disc(scene, Wavenumber(32.0), 10.0 * (r + 1));
    const CVector c = assemble_matrix(disc).partialPivLu().solve(assemble_rhs(disc, wave));
    residual[r] = boundary_residual(disc, c, wave, 3);
  }
  CHECK(residual[0] <= 5e-3);
  CHECK(residual[1] <= 0.5 * residual[0]);
}
