#include <doctest.h>

#include <cmath>

#include "ascbem/discretization.hpp"
#include "oracles.hpp"

using namespace ascbem;

TEST_CASE("unknown count follows points per wavelength") {
  const Scene s = preset_scene(ScenePreset::circle);
  const Discretization d(s, Wavenumber(16.0), 10.0);
  CHECK(d.size() == static_cast<int>(std::ceil(10.0 * 2.0 * kPi * 16.0 / kTwoPi)));
  const Discretization tiny(s, Wavenumber(0.01), 10.0);
  CHECK(tiny.size() == 4);
  CHECK_THROWS_AS(Discretization(s, Wavenumber(1.0), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(basis_degree_from_int(2), std::invalid_argument);
}

TEST_CASE("basis functions form a partition of unity") {
  const Scene s = preset_scene(ScenePreset::two_circles);
  for (auto degree : {BasisDegree::constant, BasisDegree::linear, BasisDegree::cubic}) {
    const Discretization d(s, Wavenumber(8.0), 6.0, degree);
    const Basis& b = d.basis();
    for (double t : {0.0, 0.013, 0.5, 0.77, 0.999}) {
      double sum = 0.0;
      for (int g = 0; g < b.size(); ++g) sum += b.value(g, {1, t});
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("basis values match the written-out B-splines") {
  const Scene s = preset_scene(ScenePreset::circle);
  for (int degree : {0, 1, 3}) {
    const Discretization d(s, Wavenumber(5.0), 4.0, basis_degree_from_int(degree));
    const Basis& b = d.basis();
    const int n = b.count(0);
    for (double t = 0.0; t < 1.0; t += 0.0371) {
      const int g = 3;
      const double x = periodic_diff(t, b.center(g).t) * n;
      CHECK(b.value(g, {0, t}) == doctest::Approx(oracle::bspline(degree, x)).scale(1.0));
    }
  }
}

TEST_CASE("collocation points sit at nodes or cell midpoints") {
  const Scene s = preset_scene(ScenePreset::circle);
  const Discretization lin(s, Wavenumber(4.0), 5.0, BasisDegree::linear);
  const Discretization con(s, Wavenumber(4.0), 5.0, BasisDegree::constant);
  const int n = lin.size();
  CHECK(lin.collocation()[3].t == doctest::Approx(3.0 / n));
  CHECK(con.collocation()[3].t == doctest::Approx(3.5 / con.size()));
}

TEST_CASE("matrix entries agree with adaptive reference quadrature") {
  const Scene s = preset_scene(ScenePreset::ellipse);
  for (auto degree : {BasisDegree::constant, BasisDegree::linear, BasisDegree::cubic}) {
    const Discretization d(s, Wavenumber(6.0), 8.0, degree);
    const CMatrix A = assemble_matrix(d);
    const int n = d.size();
    // Self entry, neighbours (singular and near-singular) and far entries.
    for (auto [i, j] : {std::pair{0, 0}, {5, 6}, {5, 4}, {7, 9}, {2, n / 2}, {n - 1, 0}}) {
      CAPTURE(static_cast<int>(degree));
      CAPTURE(i);
      CAPTURE(j);
      const Complex ref = oracle::matrix_entry(d, i, j);
      CHECK(std::abs(A(i, j) - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("multi-obstacle entries agree with reference quadrature") {
  const Scene s = preset_scene(ScenePreset::three_ellipses);
  const Discretization d(s, Wavenumber(10.0), 6.0);
  const CMatrix A = assemble_matrix(d);
  const int n0 = d.basis().count(0);
  for (auto [i, j] : {std::pair{0, n0 + 2}, {n0 + 1, n0 + 1}, {d.size() - 1, 3}}) {
    const Complex ref = oracle::matrix_entry(d, i, j);
    CHECK(std::abs(A(i, j) - ref) <= 1e-8 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("right-hand side is minus the incident field at collocation points") {
  const Scene s = preset_scene(ScenePreset::circle);
  const Discretization d(s, Wavenumber(12.0), 10.0);
  const auto wave = IncidentWave::plane({0.6, 0.8});
  const CVector b = assemble_rhs(d, wave);
  for (int i = 0; i < d.size(); i += 17) {
    const Complex u = eval_incident(wave, 12.0, s.position(d.collocation()[i]));
    CHECK(std::abs(b[i] + u) < 1e-15);
  }
}

TEST_CASE("boundary potential reproduces the matrix rows at collocation points") {
  const Scene s = preset_scene(ScenePreset::almost_convex);
  const Discretization d(s, Wavenumber(9.0), 8.0);
  const CMatrix A = assemble_matrix(d);
  CVector c = CVector::Zero(d.size());
  for (int j = 0; j < d.size(); ++j) c[j] = Complex(std::cos(0.3 * j), std::sin(0.1 * j));
  const BoundaryIntegrator integrator(d);
  for (int i : {0, 11, 40}) {
    const Complex direct = A.row(i) * c;
    CHECK(std::abs(integrator.potential_on_boundary(d.collocation()[i], c) - direct) <
          1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("off-boundary potential agrees with reference quadrature") {
  const Scene s = preset_scene(ScenePreset::circle);
  const Discretization d(s, Wavenumber(5.0), 12.0);
  CVector c(d.size());
  for (int j = 0; j < d.size(); ++j) c[j] = std::polar(1.0, 2.0 * kPi * j / d.size());
  const BoundaryIntegrator integrator(d);
  auto density = [&](double t) { return evaluate_density(d, c, {0, t}); };
  // The last point is within two cells of the curve and uses the graded
  // near-field rule.
  for (auto [x, tol] : {std::pair{Vec2{2.0, 0.5}, 1e-8}, {Vec2{0.1, -0.3}, 1e-8},
                        {Vec2{1.05, 0.0}, 1e-7}}) {
    const Complex ref = oracle::single_layer(s, 0, 5.0, density, x);
    const auto value = integrator.potential(x, c);
    CHECK(std::abs(value.value - ref) < tol * std::max(1.0, std::abs(ref)));
  }
}
