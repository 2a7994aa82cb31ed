#include "ascbem/kernel.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <limits>
#include <string>

namespace ascbem {

namespace {

namespace bmp = boost::math::policies;
using BesselPolicy =
    bmp::policy<bmp::promote_double<false>, bmp::overflow_error<bmp::ignore_error>>;

// Below this argument the asymptotic series cannot reach full double accuracy.
constexpr double kAsymptoticThreshold = 25.0;

// H_0^{(1)}(x) ~ sqrt(2/(pi x)) e^{i(x - pi/4)} sum_k i^k a_k / x^k with
// a_k = prod_{m<=k} (-(2m-1)^2) / (k! 8^k).
Complex hankel0_asymptotic(double x) {
  Complex term = 1.0;
  Complex sum = 1.0;
  const Complex i_unit(0.0, 1.0);
  for (int k = 1; k < 60; ++k) {
    const double m = 2.0 * k - 1.0;
    const Complex next = term * i_unit * (-(m * m) / (8.0 * k * x));
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return std::sqrt(2.0 / (kPi * x)) * std::polar(1.0, x - 0.25 * kPi) * sum;
}

}  // namespace

double bessel(BesselKind kind, int order, double x) {
  if (order < 0 || order > kMaxBesselOrder) {
    throw std::out_of_range("Bessel order " + std::to_string(order) +
                            " outside [0, 200]");
  }
  if (!std::isfinite(x)) throw std::domain_error("Bessel argument must be finite");
  if (kind == BesselKind::J) {
    if (x < 0.0) throw std::domain_error("J_n requires x >= 0");
    return boost::math::cyl_bessel_j(order, x, BesselPolicy());
  }
  if (!(x > 0.0)) throw std::domain_error("Y_n is singular at x <= 0");
  const double y = boost::math::cyl_neumann(order, x, BesselPolicy());
  return std::isfinite(y) ? y : -std::numeric_limits<double>::infinity();
}

Complex hankel1(int order, double x) {
  if (order == 0) return hankel1_0(x);
  return {bessel(BesselKind::J, order, x), bessel(BesselKind::Y, order, x)};
}

Complex hankel1_0(double x) {
  if (x >= kAsymptoticThreshold) {
    if (!std::isfinite(x)) throw std::domain_error("Hankel argument must be finite");
    return hankel0_asymptotic(x);
  }
  if (!(x > 0.0)) throw std::domain_error("H_0 is singular at x <= 0");
  return {boost::math::cyl_bessel_j(0, x, BesselPolicy()),
          boost::math::cyl_neumann(0, x, BesselPolicy())};
}

Complex greens_at_distance(double k, double r) {
  if (!(r > 0.0)) throw std::domain_error("Green's function at coincident points");
  return Complex(0.0, 0.25) * hankel1_0(k * r);
}

Complex greens_function(double k, Vec2 x, Vec2 y) {
  return greens_at_distance(k, distance(x, y));
}

Complex KernelEval::param_kernel(GlobalParam t, GlobalParam tau) const {
  if (t.obstacle == tau.obstacle && periodic_distance(t.t, tau.t) == 0.0) {
    throw std::domain_error("parameter kernel evaluated on its diagonal");
  }
  const Vec2 x = scene_->position(t);
  const Vec2 y = scene_->position(tau);
  if (x == y) throw std::domain_error("parameter kernel at coincident points");
  return greens_function(k_.value(), x, y) * scene_->speed(tau);
}

}  // namespace ascbem
