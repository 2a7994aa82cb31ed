#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "ascbem/discretization.hpp"
#include "ascbem/sparse_matrix.hpp"
#include "ascbem/windows.hpp"

namespace ascbem {

struct CorrelationConfig {
  /// Half-width of the sliding window and decay length of synthesized windows.
  double T = 0.02;
  /// Q_p = ceil(center_ratio * N_p) centers per obstacle.
  double center_ratio = 1.5;
  /// Row-wise retention threshold relative to the row maximum.
  double xi = 0.003;
  /// Merge proximity; negative means T / 2.
  double eps_merge = -1.0;

  double merge_distance() const { return eps_merge < 0.0 ? 0.5 * T : eps_merge; }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// zeta(tau - sigma) = chi(tau - sigma, -T, 0, 0, T).
double sliding_window(double tau, double sigma, double T);

/// Uniform centers sigma_q = q / Q_p on every obstacle.
class CenterGrid {
 public:
  CenterGrid(const Basis& basis, double ratio);

  int size() const { return offsets_.back(); }
  int count(int p) const { return offsets_[p + 1] - offsets_[p]; }
  int offset(int p) const { return offsets_[p]; }
  GlobalParam center(int q) const;

 private:
  std::vector<int> offsets_;
};

/// Boolean N x Q mask of correlation entries to compute.
using CorrelationMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct CorrelationMatrix {
  Eigen::MatrixXcd R;
  CenterGrid centers;
  double k = 0.0;
  /// Present for recompression; false entries are exactly zero.
  std::optional<CorrelationMask> mask;

  int rows() const { return static_cast<int>(R.rows()); }
  int cols() const { return static_cast<int>(R.cols()); }
  bool computed(int n, int q) const { return !mask || (*mask)(n, q); }
};

/// Window weight between a basis location tau and a center sigma.
using CenterWeight = std::function<double(GlobalParam tau, GlobalParam sigma)>;

/// R_{n,q} = sum_l zeta(tau_l - sigma_q) M_{n,l} c_l with tau_l the basis
/// centers.
CorrelationMatrix compute_correlations(const Eigen::MatrixXcd& M, const CVector& c,
                                       const Discretization& disc,
                                       const CorrelationConfig& cfg,
                                       const CorrelationMask* mask = nullptr);
CorrelationMatrix compute_correlations(const SparseComplexMatrix& M, const CVector& c,
                                       const Discretization& disc,
                                       const CorrelationConfig& cfg,
                                       const CorrelationMask* mask = nullptr);
/// Same sum with an arbitrary weight in place of zeta (all pairs visited).
CorrelationMatrix compute_correlations(const Eigen::MatrixXcd& M, const CVector& c,
                                       const Discretization& disc,
                                       const CorrelationConfig& cfg,
                                       const CenterWeight& weight);

/// Mask of centers inside the support of the matched previous window.
CorrelationMask correlation_mask(const WindowSet& previous, const Discretization& disc,
                                 const CenterGrid& centers);

/// Singularity window {t - 2T, t - T, t + T, t + 2T}.
ElementaryWindow singularity_window(double t, double T);

/// Thresholds each row at xi times its maximum, turns runs of retained
/// centers into plateaus with decay T, adds the singularity window and merges.
/// With `previous`, a center is retained only if its T-neighborhood lies in
/// the matched previous support and the singularity window is clipped to that
/// support, so the new windows are nested in the old ones.
WindowSet windows_from_correlations(const CorrelationMatrix& R,
                                    const CorrelationConfig& cfg,
                                    const Discretization& disc,
                                    const WindowSet* previous = nullptr);

/// A~_{ij} = w(t_m, tau_j) A_{ij} with m the matched window row; w = 0 entries
/// are not stored.
SparseComplexMatrix compress(const Eigen::MatrixXcd& A, const WindowSet& ws,
                             const Discretization& disc);
/// Same pattern as compress() but retained entries are the unscaled A_{ij}.
SparseComplexMatrix block_window_truncation(const Eigen::MatrixXcd& A,
                                            const WindowSet& ws,
                                            const Discretization& disc);
/// Assembles only the entries with w > 0 and scales them; equal bit for bit
/// to compress(assemble_matrix(disc), ws, disc).
SparseComplexMatrix assemble_compressed(const Discretization& disc, const WindowSet& ws);

/// Column-wise weights w(t_m(i), tau_j) > 0 of row i.
std::vector<std::pair<int, double>> row_weights(const WindowSet& ws,
                                                const Discretization& disc, int row);

}  // namespace ascbem
