#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ascbem/analysis.hpp"
#include "ascbem/compression.hpp"
#include "ascbem/solve.hpp"

namespace ascbem {

/// Strictly increasing wavenumbers. Correlations are recomputed whenever k has
/// doubled since the last recorrelation.
struct SweepPlan {
  std::vector<double> wavenumbers;

  static SweepPlan doubling(double k_first, double k_last);
  static SweepPlan linear(double k_first, double k_last, double step);

  /// Throws std::invalid_argument.
  void validate() const;
};

struct SweepOptions {
  double ppw = 10.0;
  BasisDegree degree = BasisDegree::linear;
  CorrelationConfig correlation;
  SolveMethod solver = SolveMethod::direct;
  double gmres_tol = 1e-5;
  /// Also solve the dense system at k > k_1 while N stays below dense_limit.
  bool dense_reference = false;
  int dense_limit = 3000;
  std::uint64_t seed = 1;
};

struct SweepStep {
  double k = 0.0;
  /// Windows used to build A~ at this k.
  WindowSet windows;
  SparseComplexMatrix compressed;
  CVector c_compressed;
  std::optional<CVector> c_dense;
  bool recorrelated = false;
  MetricsRecord metrics;
};

struct SweepResult {
  std::vector<SweepStep> steps;
  /// Set when a solve failed; steps holds the completed wavenumbers.
  std::optional<std::string> error;
};

/// At k_1: dense solve, full correlations, windows, A~. At later k: assemble
/// only windowed entries and solve for c~; at each doubling checkpoint,
/// recompute masked correlations from A~ and c~ and shrink the windows, which
/// then apply to the following wavenumbers.
SweepResult recompression_sweep(const SweepPlan& plan, const Scene& scene,
                                const IncidentWave& wave, const SweepOptions& options);

}  // namespace ascbem
