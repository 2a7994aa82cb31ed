#include "ascbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ascbem {

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence for P_n(x) and P_{n-1}(x).
      double p = 1.0;
      double p_prev = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p_prev2 = p_prev;
        p_prev = p;
        p = ((2.0 * j - 1.0) * x * p_prev - (j - 1.0) * p_prev2) / j;
      }
      dp = n * (x * p - p_prev) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        if (iter > 0) break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1 || n > 1024) throw std::invalid_argument("Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_legendre(n));
  return *slot;
}

void IntervalRule::append(const QuadratureRule& rule, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    nodes.push_back(mid + half * rule.nodes[q]);
    weights.push_back(std::abs(half) * rule.weights[q]);
  }
}

void append_graded(IntervalRule& out, double a, double b, int levels,
                   double ratio, int points_per_panel) {
  const QuadratureRule& rule = gauss_legendre(points_per_panel);
  double far = 1.0;
  for (int level = 0; level < levels; ++level) {
    const double near = far * ratio;
    out.append(rule, a + (b - a) * near, a + (b - a) * far);
    far = near;
  }
  out.append(rule, a, a + (b - a) * far);
}

}  // namespace ascbem
