#pragma once

#include <iosfwd>
#include <vector>

#include "ascbem/geometry.hpp"

namespace ascbem {

/// Elementary C-infinity window: 0 outside [lambda, rho], 1 on [l, r].
/// Returns exact 0 or 1 once the edge exponent leaves double range.
double eval_chi(double tau, double lambda, double l, double r, double rho);

/// Window on one obstacle's periodic domain. Stored unwrapped with lambda in
/// [0, 1) and lambda < l <= r < rho < lambda + 1.
struct ElementaryWindow {
  double lambda = 0.0;
  double l = 0.0;
  double r = 0.0;
  double rho = 0.0;

  /// Validates and normalizes; throws std::invalid_argument.
  static ElementaryWindow make(double lambda, double l, double r, double rho);

  double eval(double tau) const;
  double support() const { return rho - lambda; }
  bool operator==(const ElementaryWindow&) const = default;
};

/// Sum of elementary windows with disjoint supports, or the trivial window
/// w = 1 on the whole obstacle.
class CompoundWindow {
 public:
  CompoundWindow() = default;
  static CompoundWindow full();

  bool is_full() const { return full_; }
  bool empty() const { return !full_ && windows_.empty(); }
  const std::vector<ElementaryWindow>& windows() const { return windows_; }

  double eval(double tau) const;
  /// True where eval(tau) > 0.
  bool positive(double tau) const { return eval(tau) > 0.0; }
  /// True where eval(tau) == 1.
  bool on_plateau(double tau) const;
  /// Total length of the supports.
  double support_measure() const;

  bool operator==(const CompoundWindow&) const = default;

 private:
  friend CompoundWindow merge_windows(std::vector<ElementaryWindow>, double);
  bool full_ = false;
  std::vector<ElementaryWindow> windows_;
};

/// Joins windows whose supports overlap or lie closer than `eps_merge` into
/// chi(lambda_first, l_first, r_second, rho_second), including across the
/// periodic seam. A merged support reaching the full period gives the trivial
/// window. The result does not depend on input order.
CompoundWindow merge_windows(std::vector<ElementaryWindow> windows, double eps_merge);

/// Per-row windows w(t_i, .), one CompoundWindow per (row, obstacle) pair.
class WindowSet {
 public:
  WindowSet() = default;
  WindowSet(std::vector<GlobalParam> points, int obstacles);

  int rows() const { return static_cast<int>(points_.size()); }
  int obstacles() const { return obstacles_; }
  const std::vector<GlobalParam>& points() const { return points_; }
  const GlobalParam& point(int row) const { return points_[row]; }

  const CompoundWindow& window(int row, int obstacle) const {
    return windows_[static_cast<std::size_t>(row) * obstacles_ + obstacle];
  }
  CompoundWindow& window(int row, int obstacle) {
    return windows_[static_cast<std::size_t>(row) * obstacles_ + obstacle];
  }

  double eval(int row, GlobalParam tau) const {
    return window(row, tau.obstacle).eval(tau.t);
  }

  /// Row whose point is closest to t on the same obstacle (periodic distance,
  /// ties to the smaller index).
  int match(GlobalParam t) const;

  void write(std::ostream& out) const;
  static WindowSet read(std::istream& in);

  bool operator==(const WindowSet& other) const {
    return obstacles_ == other.obstacles_ && points_ == other.points_ &&
           windows_ == other.windows_;
  }

 private:
  void build_index();

  int obstacles_ = 0;
  std::vector<GlobalParam> points_;
  std::vector<CompoundWindow> windows_;
  // Per obstacle: rows sorted by parameter.
  std::vector<std::vector<std::pair<double, int>>> index_;
};

}  // namespace ascbem
