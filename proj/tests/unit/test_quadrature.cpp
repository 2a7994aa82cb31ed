#include <doctest.h>

#include <cmath>

#include "ascbem/quadrature.hpp"

using namespace ascbem;

TEST_CASE("Gauss-Legendre is exact up to degree 2n - 1") {
  for (int n : {1, 2, 5, 8, 16}) {
    const QuadratureRule& rule = gauss_legendre(n);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("rules are cached") {
  CHECK(&gauss_legendre(12) == &gauss_legendre(12));
}

TEST_CASE("interval rules map to absolute coordinates") {
  IntervalRule r;
  r.append(gauss_legendre(4), 2.0, 5.0);
  double length = 0.0;
  double moment = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    length += r.weights[i];
    moment += r.weights[i] * r.nodes[i];
  }
  CHECK(length == doctest::Approx(3.0));
  CHECK(moment == doctest::Approx(10.5));
}

TEST_CASE("graded rules integrate a logarithmic endpoint singularity") {
  IntervalRule r;
  append_graded(r, 0.0, 1.0, 20, 0.5, 8);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * std::log(r.nodes[i]);
  // The innermost panel [0, 2^-20] dominates the error.
  CHECK(std::abs(sum + 1.0) < 1e-8);
  IntervalRule deep;
  append_graded(deep, 0.0, 1.0, 30, 0.5, 8);
  double s30 = 0.0;
  for (std::size_t i = 0; i < deep.nodes.size(); ++i) s30 += deep.weights[i] * std::log(deep.nodes[i]);
  CHECK(std::abs(s30 + 1.0) < 1e-10);

  // Grading toward the right end of a reversed interval.
  IntervalRule left;
  append_graded(left, 2.0, 1.0, 20, 0.5, 8);
  double s2 = 0.0;
  for (std::size_t i = 0; i < left.nodes.size(); ++i) {
    s2 += left.weights[i] * std::log(2.0 - left.nodes[i]);
  }
  CHECK(std::abs(s2 + 1.0) < 1e-8);
}
