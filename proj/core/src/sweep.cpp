#include "ascbem/sweep.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ascbem {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr int kMinFirstSize = 64;

SolveReport solve_with(const SparseComplexMatrix& M, const CVector& b,
                       const SweepOptions& options) {
  if (options.solver == SolveMethod::gmres) {
    SolveReport report = gmres(M, b, options.gmres_tol);
    if (!report.converged) throw SolverError("GMRES did not converge");
    return report;
  }
  return sparse_solve(M, b);
}

SolveReport solve_with(const CMatrix& A, const CVector& b, const SweepOptions& options) {
  if (options.solver == SolveMethod::gmres) {
    SolveReport report = gmres(A, b, options.gmres_tol);
    if (!report.converged) throw SolverError("GMRES did not converge");
    return report;
  }
  return dense_solve(A, b);
}

}  // namespace

SweepPlan SweepPlan::doubling(double k_first, double k_last) {
  if (!(k_first > 0.0) || !(k_last >= k_first)) {
    throw std::invalid_argument("doubling plan needs 0 < k_first <= k_last");
  }
  SweepPlan plan;
  for (double k = k_first; k <= k_last * (1.0 + 1e-12); k *= 2.0) plan.wavenumbers.push_back(k);
  return plan;
}

SweepPlan SweepPlan::linear(double k_first, double k_last, double step) {
  if (!(k_first > 0.0) || !(k_last >= k_first) || !(step > 0.0)) {
    throw std::invalid_argument("linear plan needs 0 < k_first <= k_last and step > 0");
  }
  SweepPlan plan;
  const int count = static_cast<int>(std::floor((k_last - k_first) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) plan.wavenumbers.push_back(k_first + i * step);
  return plan;
}

void SweepPlan::validate() const {
  if (wavenumbers.empty()) throw std::invalid_argument("sweep plan is empty");
  for (std::size_t i = 0; i < wavenumbers.size(); ++i) {
    if (!(wavenumbers[i] > 0.0) || !std::isfinite(wavenumbers[i])) {
      throw std::invalid_argument("sweep wavenumbers must be positive and finite");
    }
    if (i > 0 && !(wavenumbers[i] > wavenumbers[i - 1])) {
      throw std::invalid_argument("sweep wavenumbers must be strictly increasing");
    }
  }
}

SweepResult recompression_sweep(const SweepPlan& plan, const Scene& scene,
                                const IncidentWave& wave, const SweepOptions& options) {
  plan.validate();
  options.correlation.validate();
  SweepResult result;
  WindowSet windows;
  double last_correlation_k = 0.0;

  for (std::size_t idx = 0; idx < plan.wavenumbers.size(); ++idx) {
    const double k = plan.wavenumbers[idx];
    const Discretization disc(scene, Wavenumber(k), options.ppw, options.degree);
    if (idx == 0 && disc.size() < kMinFirstSize) {
      throw std::invalid_argument("first sweep wavenumber gives fewer than 64 unknowns");
    }
    SweepStep step;
    step.k = k;
    MetricsRecord& m = step.metrics;
    m.k = k;
    m.n = disc.size();
    const CVector b = assemble_rhs(disc, wave);

    try {
      if (idx == 0) {
        auto start = Clock::now();
        const CMatrix A = assemble_matrix(disc);
        m.timings["assembly"] = seconds_since(start);
        start = Clock::now();
        const SolveReport dense = solve_with(A, b, options);
        m.timings["solve"] = seconds_since(start);
        start = Clock::now();
        const CorrelationMatrix R = compute_correlations(A, dense.x, disc, options.correlation);
        windows = windows_from_correlations(R, options.correlation, disc);
        m.timings["correlation"] = seconds_since(start);
        last_correlation_k = k;
        step.recorrelated = true;
        step.compressed = compress(A, windows, disc);
        step.c_dense = dense.x;
      } else {
        auto start = Clock::now();
        step.compressed = assemble_compressed(disc, windows);
        m.timings["compressed_assembly"] = seconds_since(start);
        if (options.dense_reference && disc.size() <= options.dense_limit) {
          start = Clock::now();
          const CMatrix A = assemble_matrix(disc);
          m.timings["assembly"] = seconds_since(start);
          start = Clock::now();
          step.c_dense = solve_with(A, b, options).x;
          m.timings["solve"] = seconds_since(start);
        }
      }
      step.windows = windows;

      auto start = Clock::now();
      const SolveReport compressed = solve_with(step.compressed, b, options);
      m.timings["compressed_solve"] = seconds_since(start);
      step.c_compressed = compressed.x;
      if (compressed.method == SolveMethod::gmres) m.gmres_compressed = compressed.iterations;
    } catch (const SolverError& e) {
      result.error = "k = " + std::to_string(k) + ": " + e.what();
      return result;
    }

    m.nnz_fraction = step.compressed.fill_fraction();
    auto start = Clock::now();
    m.residual_compressed = boundary_residual(disc, step.c_compressed, wave, options.seed);
    if (step.c_dense) {
      m.residual_dense = boundary_residual(disc, *step.c_dense, wave, options.seed);
      m.coefficient_error = (step.c_compressed - *step.c_dense).norm() / step.c_dense->norm();
    }
    m.timings["residual"] = seconds_since(start);

    const bool last = idx + 1 == plan.wavenumbers.size();
    if (idx > 0 && !last && k >= 2.0 * last_correlation_k * (1.0 - 1e-12)) {
      start = Clock::now();
      const CenterGrid centers(disc.basis(), options.correlation.center_ratio);
      const CorrelationMask mask = correlation_mask(windows, disc, centers);
      const CorrelationMatrix R = compute_correlations(step.compressed, step.c_compressed,
                                                       disc, options.correlation, &mask);
      windows = windows_from_correlations(R, options.correlation, disc, &windows);
      m.timings["correlation"] = seconds_since(start);
      last_correlation_k = k;
      step.recorrelated = true;
    }
    result.steps.push_back(std::move(step));
  }
  return result;
}

}  // namespace ascbem
