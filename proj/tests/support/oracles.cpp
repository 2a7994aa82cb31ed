#include "oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "ascbem/kernel.hpp"

namespace ascbem::oracle {

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

}  // namespace

double bessel_j(int n, double x) {
  const Big half = Big(x) / 2;
  const Big q = -half * half;
  Big term = boost::multiprecision::pow(half, n);
  for (int i = 1; i <= n; ++i) term /= i;
  Big sum = term;
  for (int m = 1; m < 400; ++m) {
    term *= q / (Big(m) * Big(m + n));
    sum += term;
    if (boost::multiprecision::abs(term) < Big("1e-45") * boost::multiprecision::abs(sum) &&
        m > x) {
      break;
    }
  }
  return static_cast<double>(sum);
}

double bessel_y0(double x) {
  const Big half = Big(x) / 2;
  const Big q = half * half;
  const Big pi = boost::math::constants::pi<Big>();
  const Big gamma = boost::math::constants::euler<Big>();
  Big j0 = 1;
  Big term = 1;
  Big series = 0;
  Big harmonic = 0;
  for (int m = 1; m < 400; ++m) {
    term *= -q / (Big(m) * Big(m));
    harmonic += Big(1) / m;
    j0 += term;
    series -= term * harmonic;
    if (boost::multiprecision::abs(term) * (harmonic + 1) < Big("1e-45") && m > x) break;
  }
  const Big y0 = 2 / pi * ((boost::multiprecision::log(half) + gamma) * j0 + series);
  return static_cast<double>(y0);
}

double bspline(int degree, double x) {
  const double a = std::abs(x);
  switch (degree) {
    case 0: return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
    case 1: return a < 1.0 ? 1.0 - a : 0.0;
    case 3:
      if (a < 1.0) return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
      if (a < 2.0) return (2.0 - a) * (2.0 - a) * (2.0 - a) / 6.0;
      return 0.0;
    default: return 0.0;
  }
}

std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                               double a, double b, std::vector<double> breaks) {
  // Breaks sit on every singular point, so each piece has at worst an
  // endpoint singularity, which tanh-sinh handles without bisection.
  static boost::math::quadrature::tanh_sinh<double> rule(12);
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  std::complex<double> total = 0.0;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = std::max(a, breaks[s]);
    const double hi = std::min(b, breaks[s + 1]);
    if (!(hi > lo)) continue;
    const double re = rule.integrate([&](double t) { return f(t).real(); }, lo, hi, 1e-12);
    const double im = rule.integrate([&](double t) { return f(t).imag(); }, lo, hi, 1e-12);
    total += std::complex<double>(re, im);
  }
  return total;
}

std::complex<double> matrix_entry(const Discretization& disc, int i, int j) {
  const Basis& basis = disc.basis();
  const Scene& scene = disc.scene();
  const GlobalParam t = disc.collocation()[i];
  const GlobalParam c = basis.center(j);
  const int degree = static_cast<int>(basis.degree());
  const double h = basis.cell_length(c.obstacle);
  const double half = 0.5 * basis.support_length(c.obstacle);
  const Vec2 x = scene.position(t);
  const double k = disc.k();
  // Unwrapped support [c - half, c + half]; knots every h (shifted by h/2 for
  // piecewise constants, whose knots are the cell ends).
  std::vector<double> breaks;
  for (double s = c.t - half; s <= c.t + half + 1e-14; s += h) breaks.push_back(s);
  if (t.obstacle == c.obstacle) {
    const double d = periodic_diff(t.t, c.t);
    if (std::abs(d) < half) breaks.push_back(c.t + d);
  }
  auto f = [&](double tau) -> std::complex<double> {
    const GlobalParam g{c.obstacle, wrap_unit(tau)};
    const double r = distance(x, scene.position(g));
    if (r == 0.0) return 0.0;
    return greens_at_distance(k, r) * scene.speed(g) * bspline(degree, (tau - c.t) / h);
  };
  return integrate(f, c.t - half, c.t + half, breaks);
}

std::complex<double> single_layer(const Scene& scene, int p, double k,
                                  const std::function<std::complex<double>(double)>& v,
                                  Vec2 x, double t_break) {
  std::vector<double> breaks;
  double a = 0.0;
  double b = 1.0;
  if (t_break >= 0.0) {
    // Integrate over [t_break, t_break + 1] so the singularity sits at the ends.
    a = t_break;
    b = t_break + 1.0;
  }
  for (int s = 1; s < 16; ++s) breaks.push_back(a + s / 16.0);
  auto f = [&](double tau) -> std::complex<double> {
    const GlobalParam g{p, wrap_unit(tau)};
    const double r = distance(x, scene.position(g));
    if (r == 0.0) return 0.0;
    return greens_at_distance(k, r) * scene.speed(g) * v(wrap_unit(tau));
  };
  return integrate(f, a, b, breaks);
}

bool segment_hits_disk(Vec2 a, Vec2 b, Vec2 center, double radius) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double s = dot(center - a, d) / len2;
  s = std::clamp(s, 0.0, 1.0);
  const Vec2 nearest = a + d * s;
  // Interior crossing only: nearest point strictly inside and not at an end.
  return distance(nearest, center) < radius * (1.0 - 1e-9) && s > 0.0 && s < 1.0;
}

}  // namespace ascbem::oracle
