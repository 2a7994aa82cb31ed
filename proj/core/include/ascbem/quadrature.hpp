#pragma once

#include <vector>

namespace ascbem {

/// Nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points; rules are cached and shared.
const QuadratureRule& gauss_legendre(int n);

/// Nodes/weights on an interval [a, b] (absolute coordinates).
struct IntervalRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  void append(const QuadratureRule& rule, double a, double b);
};

/// Composite rule on [a, b] graded geometrically toward the endpoint `a`
/// (a may be larger than b). Panels shrink by `ratio` per level; `levels`
/// panels plus a final panel touching `a`.
void append_graded(IntervalRule& out, double a, double b, int levels,
                   double ratio, int points_per_panel);

}  // namespace ascbem
