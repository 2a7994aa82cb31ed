#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <limits>

#include "ascbem/sweep.hpp"
#include "ascbem/visibility.hpp"

namespace ascbem::cli {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::ofstream open_output(const RunConfig& cfg, const char* name) {
  std::filesystem::create_directories(cfg.output);
  std::ofstream out(cfg.output / name);
  if (!out) throw ConfigError("key 'output': cannot write " + (cfg.output / name).string());
  return out;
}

SolveReport solve(const RunConfig& cfg, const CMatrix& A, const CVector& b) {
  if (cfg.solver == SolveMethod::gmres) {
    SolveReport r = gmres(A, b, cfg.gmres_tol);
    if (!r.converged) throw SolverError("GMRES did not converge on the dense system");
    return r;
  }
  return dense_solve(A, b);
}

SolveReport solve(const RunConfig& cfg, const SparseComplexMatrix& A, const CVector& b) {
  if (cfg.solver == SolveMethod::gmres) {
    SolveReport r = gmres(A, b, cfg.gmres_tol);
    if (!r.converged) throw SolverError("GMRES did not converge on the compressed system");
    return r;
  }
  return sparse_solve(A, b);
}

void write_field(const RunConfig& cfg, const Discretization& disc, const CVector& c,
                 const IncidentWave& wave) {
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (int p = 0; p < disc.scene().size(); ++p) {
    for (const Vec2& v : disc.scene().obstacle(p).sample(256)) {
      x0 = std::min(x0, v.x);
      x1 = std::max(x1, v.x);
      y0 = std::min(y0, v.y);
      y1 = std::max(y1, v.y);
    }
  }
  const double pad = 0.25 * std::max(x1 - x0, y1 - y0);
  const FieldGrid grid = total_field_grid(disc, c, wave, cfg.field_nx, cfg.field_ny,
                                          x0 - pad, x1 + pad, y0 - pad, y1 + pad);
  auto out = open_output(cfg, "field.txt");
  write_field_grid(out, grid);
}

}  // namespace

void write_correlation_grid(std::ostream& out, const CorrelationMatrix& R) {
  out << R.rows() << ' ' << R.cols() << '\n';
  out << std::setprecision(9);
  for (int n = 0; n < R.rows(); ++n) {
    for (int q = 0; q < R.cols(); ++q) {
      if (q) out << ' ';
      out << std::abs(R.R(n, q));
    }
    out << '\n';
  }
}

MetricsRecord cmd_solve(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.method == Method::sweep) {
    RunConfig single = cfg;
    single.k_min = single.k_max = cfg.k;
    return cmd_sweep(single).front();
  }
  const Scene scene = cfg.build_scene();
  const IncidentWave wave = cfg.build_wave();
  const Discretization disc(scene, Wavenumber(cfg.k), cfg.ppw,
                            basis_degree_from_int(cfg.degree));
  MetricsRecord m;
  m.k = cfg.k;
  m.n = disc.size();

  auto start = Clock::now();
  const DenseSystem sys = assemble_system(disc, wave);
  m.timings["assembly"] = since(start);
  start = Clock::now();
  const SolveReport dense = solve(cfg, sys.A, sys.b);
  m.timings["solve"] = since(start);
  if (dense.method == SolveMethod::gmres) m.gmres_dense = dense.iterations;
  m.residual_dense = boundary_residual(disc, dense.x, wave, cfg.seed);
  if (cfg.cond) m.cond_dense = cond_estimate(sys.A);
  CVector field_density = dense.x;

  if (cfg.method != Method::dense) {
    const CorrelationConfig ccfg = cfg.correlation();
    start = Clock::now();
    WindowSet ws;
    if (cfg.method == Method::visibility) {
      ws = visibility_windows(scene, wave, disc, cfg.visibility());
    } else {
      const CorrelationMatrix R = compute_correlations(sys.A, dense.x, disc, ccfg);
      ws = windows_from_correlations(R, ccfg, disc);
      auto out = open_output(cfg, "corr.txt");
      write_correlation_grid(out, R);
    }
    m.timings["windows"] = since(start);
    start = Clock::now();
    const SparseComplexMatrix At = cfg.method == Method::block_truncate
                                       ? block_window_truncation(sys.A, ws, disc)
                                       : compress(sys.A, ws, disc);
    m.timings["compress"] = since(start);
    start = Clock::now();
    const SolveReport comp = solve(cfg, At, sys.b);
    m.timings["compressed_solve"] = since(start);
    if (comp.method == SolveMethod::gmres) m.gmres_compressed = comp.iterations;
    m.nnz_fraction = At.fill_fraction();
    m.residual_compressed = boundary_residual(disc, comp.x, wave, cfg.seed);
    const double scale = dense.x.norm();
    m.coefficient_error = scale > 0.0 ? (comp.x - dense.x).norm() / scale : 0.0;
    if (cfg.cond) m.cond_compressed = cond_estimate(At);
    field_density = comp.x;
    {
      auto out = open_output(cfg, "pattern.txt");
      At.write_pattern(out);
    }
    auto out = open_output(cfg, "windows.txt");
    ws.write(out);
  }

  if (cfg.field_nx > 0) write_field(cfg, disc, field_density, wave);
  {
    auto out = open_output(cfg, "metrics.txt");
    write_metrics(out, m);
  }
  auto out = open_output(cfg, "timings.txt");
  write_timings(out, {m});
  return m;
}

std::vector<MetricsRecord> cmd_sweep(const RunConfig& cfg) {
  cfg.validate();
  const Scene scene = cfg.build_scene();
  const IncidentWave wave = cfg.build_wave();
  const SweepPlan plan = cfg.k_step > 0.0 ? SweepPlan::linear(cfg.k_min, cfg.k_max, cfg.k_step)
                                          : SweepPlan::doubling(cfg.k_min, cfg.k_max);
  SweepOptions options;
  options.ppw = cfg.ppw;
  options.degree = basis_degree_from_int(cfg.degree);
  options.correlation = cfg.correlation();
  options.solver = cfg.solver;
  options.gmres_tol = cfg.gmres_tol;
  options.dense_reference = cfg.dense_reference;
  options.dense_limit = cfg.dense_limit;
  options.seed = cfg.seed;

  SweepResult result;
  try {
    result = recompression_sweep(plan, scene, wave, options);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("key 'k_min': ") + e.what());
  }
  std::vector<MetricsRecord> records;
  for (const SweepStep& step : result.steps) records.push_back(step.metrics);
  {
    auto out = open_output(cfg, "metrics.txt");
    write_metrics(out, records);
  }
  {
    auto out = open_output(cfg, "timings.txt");
    write_timings(out, records);
  }
  if (!result.steps.empty()) {
    const SweepStep& last = result.steps.back();
    {
      auto out = open_output(cfg, "pattern.txt");
      last.compressed.write_pattern(out);
    }
    auto out = open_output(cfg, "windows.txt");
    last.windows.write(out);
    if (cfg.field_nx > 0) {
      const Discretization disc(scene, Wavenumber(last.k), cfg.ppw, options.degree);
      write_field(cfg, disc, last.c_compressed, wave);
    }
  }
  if (result.error) throw SolverError(*result.error);
  return records;
}

CorrelationMatrix cmd_correlations(const RunConfig& cfg) {
  cfg.validate();
  const Scene scene = cfg.build_scene();
  const IncidentWave wave = cfg.build_wave();
  const Discretization disc(scene, Wavenumber(cfg.k), cfg.ppw,
                            basis_degree_from_int(cfg.degree));
  const DenseSystem sys = assemble_system(disc, wave);
  const SolveReport dense = solve(cfg, sys.A, sys.b);
  CorrelationMatrix R = compute_correlations(sys.A, dense.x, disc, cfg.correlation());
  auto out = open_output(cfg, "corr.txt");
  write_correlation_grid(out, R);
  return R;
}

}  // namespace ascbem::cli
