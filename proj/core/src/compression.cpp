#include "ascbem/compression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ascbem {

void CorrelationConfig::validate() const {
  if (!(T > 0.0 && T < 0.25)) throw std::invalid_argument("T must lie in (0, 0.25)");
  if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
  if (!(center_ratio > 1.0)) throw std::invalid_argument("center_ratio must exceed 1");
  if (eps_merge >= 0.25) throw std::invalid_argument("eps_merge must be below 0.25");
}

double sliding_window(double tau, double sigma, double T) {
  return eval_chi(periodic_diff(tau, sigma), -T, 0.0, 0.0, T);
}

CenterGrid::CenterGrid(const Basis& basis, double ratio) : offsets_{0} {
  for (int p = 0; p < basis.obstacles(); ++p) {
    const int q = static_cast<int>(std::ceil(ratio * basis.count(p)));
    offsets_.push_back(offsets_.back() + q);
  }
}

GlobalParam CenterGrid::center(int q) const {
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), q);
  const int p = static_cast<int>(it - offsets_.begin()) - 1;
  return {p, static_cast<double>(q - offsets_[p]) / count(p)};
}

namespace {

struct WeightEntry {
  int column;
  double weight;
};

// Indices j of basis centers strictly inside (a, b) on obstacle p, unwrapped.
template <typename F>
void for_centers_in(const Basis& basis, int p, double a, double b, F&& f) {
  const int n = basis.count(p);
  const double shift = basis.degree() == BasisDegree::constant ? 0.5 : 0.0;
  const long first = static_cast<long>(std::floor(a * n - shift));
  const long last = static_cast<long>(std::ceil(b * n - shift));
  const long span = std::min<long>(last - first, n - 1 + 2);
  for (long s = 0; s <= span; ++s) {
    const long j = first + s;
    const double tau = (j + shift) / n;
    if (tau <= a || tau >= b) continue;
    const int local = static_cast<int>(((j % n) + n) % n);
    f(local, tau);
  }
}

// For each center q: basis functions l with zeta(tau_l - sigma_q) > 0.
std::vector<std::vector<WeightEntry>> sliding_weights(const Discretization& disc,
                                                      const CenterGrid& centers,
                                                      double T) {
  const Basis& basis = disc.basis();
  std::vector<std::vector<WeightEntry>> weights(centers.size());
  for (int q = 0; q < centers.size(); ++q) {
    const GlobalParam sigma = centers.center(q);
    const int p = sigma.obstacle;
    for_centers_in(basis, p, sigma.t - T, sigma.t + T, [&](int local, double tau) {
      const double w = sliding_window(tau, sigma.t, T);
      if (w > 0.0) weights[q].push_back({basis.offset(p) + local, w});
    });
  }
  return weights;
}

template <typename RowProducts>
CorrelationMatrix correlate(const Discretization& disc, const CorrelationConfig& cfg,
                            const CorrelationMask* mask,
                            const std::vector<std::vector<WeightEntry>>& weights,
                            const CenterGrid& centers, RowProducts&& row_products) {
  const int n = disc.size();
  const int q_count = centers.size();
  if (mask && (mask->rows() != n || mask->cols() != q_count)) {
    throw std::invalid_argument("correlation mask has wrong shape");
  }
  CorrelationMatrix result{Eigen::MatrixXcd::Zero(n, q_count), centers, disc.k(),
                           std::nullopt};
  if (mask) result.mask = *mask;
#pragma omp parallel
  {
    std::vector<Complex> y(n);
#pragma omp for schedule(dynamic, 16)
    for (int row = 0; row < n; ++row) {
      row_products(row, y);
      for (int q = 0; q < q_count; ++q) {
        if (mask && !(*mask)(row, q)) continue;
        Complex sum = 0.0;
        for (const auto& e : weights[q]) sum += e.weight * y[e.column];
        result.R(row, q) = sum;
      }
    }
  }
  (void)cfg;
  return result;
}

void check_dims(Eigen::Index rows, Eigen::Index cols, const CVector& c,
                const Discretization& disc) {
  if (rows != disc.size() || cols != disc.size() || c.size() != disc.size()) {
    throw std::invalid_argument("correlation dimension mismatch");
  }
}

}  // namespace

CorrelationMatrix compute_correlations(const Eigen::MatrixXcd& M, const CVector& c,
                                       const Discretization& disc,
                                       const CorrelationConfig& cfg,
                                       const CorrelationMask* mask) {
  cfg.validate();
  check_dims(M.rows(), M.cols(), c, disc);
  const CenterGrid centers(disc.basis(), cfg.center_ratio);
  const auto weights = sliding_weights(disc, centers, cfg.T);
  const int n = disc.size();
  return correlate(disc, cfg, mask, weights, centers,
                   [&](int row, std::vector<Complex>& y) {
                     for (int l = 0; l < n; ++l) y[l] = M(row, l) * c[l];
                   });
}

CorrelationMatrix compute_correlations(const SparseComplexMatrix& M, const CVector& c,
                                       const Discretization& disc,
                                       const CorrelationConfig& cfg,
                                       const CorrelationMask* mask) {
  cfg.validate();
  check_dims(M.size(), M.size(), c, disc);
  const CenterGrid centers(disc.basis(), cfg.center_ratio);
  const auto weights = sliding_weights(disc, centers, cfg.T);
  const auto& ptr = M.row_ptr();
  const auto& cols = M.cols();
  const auto& values = M.values();
  return correlate(disc, cfg, mask, weights, centers,
                   [&](int row, std::vector<Complex>& y) {
                     std::fill(y.begin(), y.end(), Complex{});
                     for (std::size_t e = ptr[row]; e < ptr[row + 1]; ++e) {
                       y[cols[e]] = values[e] * c[cols[e]];
                     }
                   });
}

CorrelationMatrix compute_correlations(const Eigen::MatrixXcd& M, const CVector& c,
                                       const Discretization& disc,
                                       const CorrelationConfig& cfg,
                                       const CenterWeight& weight) {
  cfg.validate();
  check_dims(M.rows(), M.cols(), c, disc);
  const CenterGrid centers(disc.basis(), cfg.center_ratio);
  const int n = disc.size();
  std::vector<std::vector<WeightEntry>> weights(centers.size());
  for (int q = 0; q < centers.size(); ++q) {
    for (int l = 0; l < n; ++l) {
      const double w = weight(disc.basis().center(l), centers.center(q));
      if (w != 0.0) weights[q].push_back({l, w});
    }
  }
  return correlate(disc, cfg, nullptr, weights, centers,
                   [&](int row, std::vector<Complex>& y) {
                     for (int l = 0; l < n; ++l) y[l] = M(row, l) * c[l];
                   });
}

CorrelationMask correlation_mask(const WindowSet& previous, const Discretization& disc,
                                 const CenterGrid& centers) {
  const int n = disc.size();
  CorrelationMask mask(n, centers.size());
  for (int row = 0; row < n; ++row) {
    const int m = previous.match(disc.collocation()[row]);
    for (int q = 0; q < centers.size(); ++q) {
      const GlobalParam sigma = centers.center(q);
      mask(row, q) = previous.window(m, sigma.obstacle).positive(sigma.t);
    }
  }
  return mask;
}

ElementaryWindow singularity_window(double t, double T) {
  return ElementaryWindow::make(t - 2.0 * T, t - T, t + T, t + 2.0 * T);
}

namespace {

// The elementary window of `cw` whose support contains t, unwrapped so that
// its frame contains t; nullptr when t is outside the support.
const ElementaryWindow* containing(const CompoundWindow& cw, double t) {
  for (const auto& w : cw.windows()) {
    if (w.eval(t) > 0.0) return &w;
  }
  return nullptr;
}

// True when (sigma - half, sigma + half) lies inside one elementary window.
bool covers(const CompoundWindow& cw, double sigma, double half) {
  if (cw.is_full()) return true;
  const ElementaryWindow* w = containing(cw, sigma);
  if (!w) return false;
  const double s = w->lambda + wrap_unit(sigma - w->lambda);
  return s - half > w->lambda && s + half < w->rho;
}

ElementaryWindow clipped_singularity(double t, double T, const CompoundWindow& old) {
  if (old.is_full()) return singularity_window(t, T);
  const ElementaryWindow* w = containing(old, t);
  if (!w) return singularity_window(t, T);
  const double s = w->lambda + wrap_unit(t - w->lambda);
  const double lambda = std::max(s - 2.0 * T, w->lambda);
  const double rho = std::min(s + 2.0 * T, w->rho);
  const double l = std::max(s - T, 0.5 * (lambda + s));
  const double r = std::min(s + T, 0.5 * (rho + s));
  return ElementaryWindow::make(lambda, l, r, rho);
}

}  // namespace

WindowSet windows_from_correlations(const CorrelationMatrix& R,
                                    const CorrelationConfig& cfg,
                                    const Discretization& disc,
                                    const WindowSet* previous) {
  cfg.validate();
  const int n = disc.size();
  if (R.rows() != n) throw std::invalid_argument("correlation rows do not match");
  const CenterGrid& centers = R.centers;
  const int obstacles = disc.scene().size();
  WindowSet ws(disc.collocation(), obstacles);
  const double T = cfg.T;

#pragma omp parallel for schedule(dynamic, 16)
  for (int row = 0; row < n; ++row) {
    const GlobalParam t = disc.collocation()[row];
    const int m = previous ? previous->match(t) : -1;
    double row_max = 0.0;
    for (int q = 0; q < centers.size(); ++q) {
      if (R.computed(row, q)) row_max = std::max(row_max, std::abs(R.R(row, q)));
    }
    const double threshold = cfg.xi * row_max;

    for (int p = 0; p < obstacles; ++p) {
      const int count = centers.count(p);
      const int offset = centers.offset(p);
      std::vector<char> keep(count, 0);
      int kept = 0;
      if (row_max > 0.0) {
        for (int j = 0; j < count; ++j) {
          const int q = offset + j;
          if (!R.computed(row, q) || std::abs(R.R(row, q)) < threshold) continue;
          if (previous && !covers(previous->window(m, p), centers.center(q).t, T)) continue;
          keep[j] = 1;
          ++kept;
        }
      }

      std::vector<ElementaryWindow> pieces;
      bool full = false;
      if (kept == count) {
        ws.window(row, p) = CompoundWindow::full();
        continue;
      }
      if (kept > 0) {
        int start = 0;
        while (keep[start]) ++start;
        // Walk the ring from a dropped center so runs never straddle the start.
        for (int s = 1; s <= count; ++s) {
          const int j = (start + s) % count;
          if (!keep[j]) continue;
          const int first = start + s;
          int last = first;
          while (keep[(last + 1) % count] && last + 1 < start + count) ++last;
          const double a = static_cast<double>(first) / count;
          const double b = static_cast<double>(last) / count;
          if (b - a + 2.0 * T >= 1.0) {
            full = true;
            break;
          }
          pieces.push_back(ElementaryWindow::make(a - T, a, b, b + T));
          s += last - first;
        }
      }
      if (full) {
        ws.window(row, p) = CompoundWindow::full();
        continue;
      }
      if (p == t.obstacle) {
        pieces.push_back(previous ? clipped_singularity(t.t, T, previous->window(m, p))
                                  : singularity_window(t.t, T));
      }
      ws.window(row, p) = merge_windows(std::move(pieces), cfg.merge_distance());
    }
  }
  return ws;
}

std::vector<std::pair<int, double>> row_weights(const WindowSet& ws,
                                                const Discretization& disc, int row) {
  const Basis& basis = disc.basis();
  const int m = ws.match(disc.collocation()[row]);
  std::vector<std::pair<int, double>> out;
  for (int p = 0; p < basis.obstacles(); ++p) {
    const CompoundWindow& cw = ws.window(m, p);
    const int off = basis.offset(p);
    if (cw.is_full()) {
      for (int j = 0; j < basis.count(p); ++j) out.emplace_back(off + j, 1.0);
      continue;
    }
    for (const auto& w : cw.windows()) {
      for_centers_in(basis, p, w.lambda, w.rho, [&](int local, double tau) {
        const double value = eval_chi(tau, w.lambda, w.l, w.r, w.rho);
        if (value > 0.0) out.emplace_back(off + local, value);
      });
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <typename Value>
SparseComplexMatrix build_rows(const Discretization& disc, const WindowSet& ws,
                               Value&& value) {
  const int n = disc.size();
  std::vector<std::vector<std::pair<int, double>>> weights(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) weights[i] = row_weights(ws, disc, i);

  std::vector<std::size_t> row_ptr{0};
  std::size_t total = 0;
  for (int i = 0; i < n; ++i) {
    total += weights[i].size();
    row_ptr.push_back(total);
  }
  std::vector<int> cols(total);
  std::vector<Complex> values(total);
  value(weights, row_ptr, cols, values);
  return SparseComplexMatrix(n, std::move(row_ptr), std::move(cols), std::move(values));
}

}  // namespace

SparseComplexMatrix compress(const Eigen::MatrixXcd& A, const WindowSet& ws,
                             const Discretization& disc) {
  if (A.rows() != disc.size() || A.cols() != disc.size()) {
    throw std::invalid_argument("compress dimension mismatch");
  }
  return build_rows(disc, ws, [&](const auto& weights, const auto& ptr, auto& cols,
                                  auto& values) {
    for (int i = 0; i < disc.size(); ++i) {
      std::size_t e = ptr[i];
      for (const auto& [j, w] : weights[i]) {
        cols[e] = j;
        values[e] = w * A(i, j);
        ++e;
      }
    }
  });
}

SparseComplexMatrix block_window_truncation(const Eigen::MatrixXcd& A,
                                            const WindowSet& ws,
                                            const Discretization& disc) {
  if (A.rows() != disc.size() || A.cols() != disc.size()) {
    throw std::invalid_argument("block truncation dimension mismatch");
  }
  return build_rows(disc, ws, [&](const auto& weights, const auto& ptr, auto& cols,
                                  auto& values) {
    for (int i = 0; i < disc.size(); ++i) {
      std::size_t e = ptr[i];
      for (const auto& [j, w] : weights[i]) {
        cols[e] = j;
        values[e] = A(i, j);
        ++e;
      }
    }
  });
}

namespace {

// Cells of supp phi_j in ascending order.
void support_cells(const Basis& basis, int g, std::vector<CellRef>& out) {
  const auto [p, j] = basis.local_index(g);
  const int n = basis.count(p);
  auto wrap = [n](int c) { return ((c % n) + n) % n; };
  switch (basis.degree()) {
    case BasisDegree::constant: out.push_back({p, j}); break;
    case BasisDegree::linear:
      out.push_back({p, wrap(j - 1)});
      out.push_back({p, j});
      break;
    case BasisDegree::cubic:
      for (int d = -2; d <= 1; ++d) out.push_back({p, wrap(j + d)});
      break;
  }
}

}  // namespace

SparseComplexMatrix assemble_compressed(const Discretization& disc, const WindowSet& ws) {
  const BoundaryIntegrator integrator(disc);
  const Basis& basis = disc.basis();
  return build_rows(disc, ws, [&](const auto& weights, const auto& ptr, auto& cols,
                                  auto& values) {
#pragma omp parallel
    {
      std::vector<Complex> buffer(disc.size(), Complex{});
      std::vector<CellRef> cells;
#pragma omp for schedule(dynamic, 8)
      for (int i = 0; i < disc.size(); ++i) {
        cells.clear();
        for (const auto& entry : weights[i]) support_cells(basis, entry.first, cells);
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        integrator.row_cells(disc.collocation()[i], cells, buffer);
        std::size_t e = ptr[i];
        for (const auto& [j, w] : weights[i]) {
          cols[e] = j;
          values[e] = w * buffer[j];
          ++e;
        }
        for (const auto& cell : cells) {
          for (int m = 0; m < basis.shapes_per_cell(); ++m) {
            buffer[basis.offset(cell.obstacle) +
                   basis.cell_basis(cell.obstacle, cell.cell, m)] = Complex{};
          }
        }
      }
    }
  });
}

}  // namespace ascbem
