#pragma once

#include <complex>
#include <stdexcept>

#include "ascbem/geometry.hpp"

namespace ascbem {

/// Positive finite wavenumber (radians per length unit).
class Wavenumber {
 public:
  explicit Wavenumber(double k) : k_(k) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("wavenumber must be positive and finite");
    }
  }
  double value() const { return k_; }
  double wavelength() const { return kTwoPi / k_; }

 private:
  double k_;
};

enum class BesselKind { J, Y };

inline constexpr int kMaxBesselOrder = 200;

/// J_n(x) or Y_n(x) for integer 0 <= n <= 200. Y requires x > 0, J x >= 0.
/// Y overflows to -infinity for very large orders at small arguments.
double bessel(BesselKind kind, int order, double x);

/// H_n^{(1)}(x) = J_n(x) + i Y_n(x), x > 0.
Complex hankel1(int order, double x);

/// H_0^{(1)}(x), x > 0. Uses the Hankel asymptotic series for large x.
Complex hankel1_0(double x);

/// Outgoing 2D Helmholtz fundamental solution (i/4) H_0^{(1)}(k r).
Complex greens_function(double k, Vec2 x, Vec2 y);
Complex greens_at_distance(double k, double r);

/// Green's function pulled back to the parameter domain of a scene,
/// K(kappa(t), kappa(tau)) |kappa'(tau)|.
class KernelEval {
 public:
  KernelEval(const Scene& scene, Wavenumber k) : scene_(&scene), k_(k) {}

  Complex param_kernel(GlobalParam t, GlobalParam tau) const;
  double wavenumber() const { return k_.value(); }

 private:
  const Scene* scene_;
  Wavenumber k_;
};

}  // namespace ascbem
