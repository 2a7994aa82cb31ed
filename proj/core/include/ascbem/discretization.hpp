#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "ascbem/geometry.hpp"
#include "ascbem/kernel.hpp"
#include "ascbem/quadrature.hpp"

namespace ascbem {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

enum class BasisDegree : int { constant = 0, linear = 1, cubic = 3 };

BasisDegree basis_degree_from_int(int degree);

/// Periodic B-spline basis on a uniform mesh t_j = j / N_p, one block of
/// functions per obstacle. Global indices run obstacle by obstacle.
class Basis {
 public:
  Basis(BasisDegree degree, std::vector<int> counts);

  BasisDegree degree() const { return degree_; }
  int size() const { return offsets_.back(); }
  int obstacles() const { return static_cast<int>(counts_.size()); }
  int count(int p) const { return counts_[p]; }
  int offset(int p) const { return offsets_[p]; }
  double cell_length(int p) const { return 1.0 / counts_[p]; }

  int global_index(int p, int j) const { return offsets_[p] + j; }
  std::pair<int, int> local_index(int g) const;

  /// Representative point tau_j: the center of supp phi_j.
  GlobalParam center(int g) const;
  /// Length of supp phi_j in parameter units.
  double support_length(int p) const;
  /// Number of basis functions that are nonzero on one cell.
  int shapes_per_cell() const;
  /// Local basis index of shape m on cell c of obstacle p.
  int cell_basis(int p, int c, int m) const;
  /// Value of shape m at local coordinate u in [0, 1] of a cell.
  double shape(int m, double u) const;

  /// phi_g(tau).
  double value(int g, GlobalParam tau) const;

 private:
  BasisDegree degree_;
  std::vector<int> counts_;
  std::vector<int> offsets_;
};

/// Collocation discretization of the single-layer equation at one wavenumber.
class Discretization {
 public:
  /// N_p = ceil(ppw * L_p * k / (2 pi)) basis functions on obstacle p.
  Discretization(Scene scene, Wavenumber k, double ppw,
                 BasisDegree degree = BasisDegree::linear);
  /// Explicit per-obstacle counts.
  Discretization(Scene scene, Wavenumber k, std::vector<int> counts,
                 BasisDegree degree);

  const Scene& scene() const { return scene_; }
  double k() const { return k_.value(); }
  Wavenumber wavenumber() const { return k_; }
  double ppw() const { return ppw_; }
  const Basis& basis() const { return basis_; }
  int size() const { return basis_.size(); }

  /// Collocation points t_i (cell midpoints for degree 0, nodes otherwise).
  const std::vector<GlobalParam>& collocation() const { return collocation_; }

 private:
  void init_collocation();

  Scene scene_;
  Wavenumber k_;
  double ppw_ = 0.0;
  Basis basis_;
  std::vector<GlobalParam> collocation_;
};

/// A cell of the mesh: obstacle index and cell index.
struct CellRef {
  int obstacle = 0;
  int cell = 0;
  auto operator<=>(const CellRef&) const = default;
};

/// Integrates G(x, kappa(tau)) |kappa'(tau)| phi_j(tau) over mesh cells.
///
/// Regular cells use cached composite Gauss-Legendre nodes with
/// max(8, ceil(3 k h)) points. A cell within one cell length of an on-boundary
/// target is split at the target and graded geometrically toward it (ratio
/// 1/2, 20 levels, 8 points per panel). Other targets closer than 1.5 cell
/// lengths use a composite rule graded toward the nearest node.
class BoundaryIntegrator {
 public:
  explicit BoundaryIntegrator(const Discretization& disc);

  const Discretization& discretization() const { return *disc_; }

  /// out[j] = int K(t, tau) phi_j(tau) dtau for every basis function j.
  void row(GlobalParam t, std::span<Complex> out) const;
  /// Same, restricted to `cells` (sorted); contributions are accumulated into
  /// `out` in cell order so shared entries match row() bit for bit.
  void row_cells(GlobalParam t, std::span<const CellRef> cells,
                 std::span<Complex> out) const;

  /// Single-layer potential sum_j c_j int G(x, kappa) |kappa'| phi_j at a
  /// point on the boundary.
  Complex potential_on_boundary(GlobalParam t, const CVector& c) const;

  struct FieldValue {
    Complex value;
    bool near_boundary = false;
  };
  /// Single-layer potential at a point off the boundary. `near_boundary` is
  /// set when the point is within one element length of the boundary.
  FieldValue potential(Vec2 x, const CVector& c) const;

  /// Quadrature node count of a regular cell on obstacle p.
  int regular_points(int p) const { return points_per_cell_[p]; }

 private:
  struct Target {
    Vec2 x;
    bool on_boundary = false;
    GlobalParam t;
  };
  void cell_integrals(const Target& target, CellRef cell, Complex* out) const;
  void cell_integrals_rule(const Target& target, CellRef cell,
                           const IntervalRule& local_rule, Complex* out) const;
  std::size_t node_offset(CellRef cell) const {
    return cell_offsets_[cell.obstacle] +
           static_cast<std::size_t>(cell.cell) * points_per_cell_[cell.obstacle];
  }

  const Discretization* disc_;
  int shapes_ = 0;
  std::vector<int> points_per_cell_;
  std::vector<double> cell_arc_;  // arc length per cell, flat cell index
  std::vector<std::size_t> cell_offsets_;
  std::vector<Vec2> node_pos_;
  std::vector<double> node_weight_;  // Gauss weight * speed * cell length
  std::vector<double> node_shape_;   // shapes_ values per node
};

struct DenseSystem {
  CMatrix A;
  CVector b;
};

/// A_{ij} = int_{S_j} K(t_i, tau) phi_j(tau) dtau (row-parallel).
CMatrix assemble_matrix(const Discretization& disc);
/// b_i = -u_inc(kappa(t_i)).
CVector assemble_rhs(const Discretization& disc, const IncidentWave& wave);
DenseSystem assemble_system(const Discretization& disc, const IncidentWave& wave);

/// v_N(tau) = sum_j c_j phi_j(tau).
Complex evaluate_density(const Discretization& disc, const CVector& c,
                         GlobalParam tau);

}  // namespace ascbem
