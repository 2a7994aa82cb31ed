#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ascbem/discretization.hpp"
#include "ascbem/sparse_matrix.hpp"

namespace ascbem {

/// Per-wavenumber results. Optional fields are omitted when serialized.
struct MetricsRecord {
  double k = 0.0;
  int n = 0;
  double nnz_fraction = 1.0;
  std::optional<double> residual_dense;
  std::optional<double> residual_compressed;
  std::optional<double> coefficient_error;
  std::optional<double> interior_error;
  std::optional<double> cond_dense;
  std::optional<double> cond_compressed;
  std::optional<int> gmres_dense;
  std::optional<int> gmres_compressed;
  /// Wall-clock seconds per phase; written separately from the metrics.
  std::map<std::string, double> timings;

  bool operator==(const MetricsRecord&) const = default;
};

/// "key = value" lines, full precision; timings are not written.
void write_metrics(std::ostream& out, const MetricsRecord& record);
/// Records separated by blank lines.
void write_metrics(std::ostream& out, const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> read_metrics(std::istream& in);
/// "k = ..." followed by "phase = seconds" lines per record.
void write_timings(std::ostream& out, const std::vector<MetricsRecord>& records);

using FieldValue = BoundaryIntegrator::FieldValue;

/// u^s(x) = int G(x, kappa(tau)) |kappa'(tau)| v_N(tau) dtau at each point.
std::vector<FieldValue> scattered_field(const Discretization& disc, const CVector& c,
                                        const std::vector<Vec2>& points);

inline constexpr int kResidualPoints = 100;

/// Relative 1-norm sum |u^s + u^inc| / sum |u^inc| at `count` seeded uniform
/// boundary points (global parameter), skipping collocation nodes.
double boundary_residual(const Discretization& disc, const CVector& c,
                         const IncidentWave& wave, std::uint64_t seed,
                         int count = kResidualPoints);

/// Seeded uniform points strictly inside the obstacles, at least `margin`
/// away from every boundary.
std::vector<Vec2> sample_interior_points(const Scene& scene, int count,
                                         std::uint64_t seed, double margin = 0.05);

/// Mean |u^s + u^inc| over `points` divided by max |u^inc| on the boundary.
double interior_extinction(const Discretization& disc, const CVector& c,
                           const IncidentWave& wave, const std::vector<Vec2>& points);

/// Exact density v = -du_tot/dn on a sound-soft circle hit by a plane wave,
/// from the separation-of-variables series.
class MieDensity {
 public:
  /// truncation <= 0 picks ceil(k a) + 30.
  MieDensity(Vec2 center, double radius, double k, const PlaneWave& wave,
             int truncation = 0);

  /// Density at parameter t of the circle center + a (cos 2 pi t, sin 2 pi t).
  Complex operator()(double t) const;
  int truncation() const { return static_cast<int>(coefficients_.size()) - 1; }
  /// Magnitude of the last series coefficient.
  double tail() const;
  /// True when the tail exceeds 1e-12.
  bool truncation_warning() const { return tail() > 1e-12; }

 private:
  double alpha_ = 0.0;
  Complex prefactor_;
  std::vector<Complex> coefficients_;  // 2 i^n / H_n(ka), n >= 1; 1/H_0 at n = 0
};

/// sqrt(sum |v_N(t_i) - v(t_i)|^2 / sum |v(t_i)|^2) over the collocation points.
double density_error(const Discretization& disc, const CVector& c, const MieDensity& mie);

struct SparsityStats {
  std::size_t nnz = 0;
  double fraction = 0.0;
  std::size_t min_row = 0;
  std::size_t max_row = 0;
};
SparsityStats sparsity_stats(const SparseComplexMatrix& M);

struct FieldGrid {
  int nx = 0;
  int ny = 0;
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;
  /// Row-major, y outer; NaN where the point is too close to the boundary.
  std::vector<Complex> values;
};

/// Total field u^s + u^inc on a uniform grid.
FieldGrid total_field_grid(const Discretization& disc, const CVector& c,
                           const IncidentWave& wave, int nx, int ny, double x0,
                           double x1, double y0, double y1);
/// Header "nx ny x0 x1 y0 y1", then "re im" per point.
void write_field_grid(std::ostream& out, const FieldGrid& grid);

}  // namespace ascbem
