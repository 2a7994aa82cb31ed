#pragma once

#include <vector>

#include "ascbem/analysis.hpp"
#include "run_config.hpp"

namespace ascbem::cli {

/// Dense solve plus the compression selected by cfg.method. Writes
/// metrics.txt, timings.txt and, when compressed, pattern.txt and
/// windows.txt (corr.txt for correlation-based methods, field.txt when a
/// field grid is requested). Throws ConfigError or SolverError.
MetricsRecord cmd_solve(const RunConfig& cfg);

/// Recompression sweep over [k_min, k_max]. Completed wavenumbers are written
/// even when a later solve fails, in which case SolverError is rethrown.
std::vector<MetricsRecord> cmd_sweep(const RunConfig& cfg);

/// Dense solve at cfg.k and the full |R| grid in corr.txt.
CorrelationMatrix cmd_correlations(const RunConfig& cfg);

void write_correlation_grid(std::ostream& out, const CorrelationMatrix& R);

}  // namespace ascbem::cli
