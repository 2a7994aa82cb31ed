#include "ascbem/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ascbem {

namespace {

constexpr int kGradedLevels = 20;
constexpr double kGradedRatio = 0.5;
constexpr int kGradedPoints = 8;
constexpr int kNearPoints = 10;
// Off-boundary targets closer than this many cell lengths get a refined rule.
constexpr double kNearFactor = 1.5;
constexpr int kMinCells = 4;

double cubic_bspline(double x) {
  const double a = std::abs(x);
  if (a < 1.0) return (4.0 - 6.0 * a * a + 3.0 * a * a * a) / 6.0;
  if (a < 2.0) {
    const double b = 2.0 - a;
    return b * b * b / 6.0;
  }
  return 0.0;
}

}  // namespace

BasisDegree basis_degree_from_int(int degree) {
  switch (degree) {
    case 0: return BasisDegree::constant;
    case 1: return BasisDegree::linear;
    case 3: return BasisDegree::cubic;
    default:
      throw std::invalid_argument("basis degree must be 0, 1 or 3, got " +
                                  std::to_string(degree));
  }
}

Basis::Basis(BasisDegree degree, std::vector<int> counts)
    : degree_(degree), counts_(std::move(counts)) {
  if (counts_.empty()) throw std::invalid_argument("basis needs at least one obstacle");
  offsets_.assign(counts_.size() + 1, 0);
  for (std::size_t p = 0; p < counts_.size(); ++p) {
    if (counts_[p] < kMinCells) {
      throw std::invalid_argument("each obstacle needs at least 4 basis functions");
    }
    offsets_[p + 1] = offsets_[p] + counts_[p];
  }
}

std::pair<int, int> Basis::local_index(int g) const {
  if (g < 0 || g >= size()) throw std::out_of_range("basis index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), g);
  const int p = static_cast<int>(it - offsets_.begin()) - 1;
  return {p, g - offsets_[p]};
}

GlobalParam Basis::center(int g) const {
  const auto [p, j] = local_index(g);
  const double h = cell_length(p);
  if (degree_ == BasisDegree::constant) return {p, (j + 0.5) * h};
  return {p, j * h};
}

double Basis::support_length(int p) const {
  switch (degree_) {
    case BasisDegree::constant: return cell_length(p);
    case BasisDegree::linear: return 2.0 * cell_length(p);
    case BasisDegree::cubic: return 4.0 * cell_length(p);
  }
  return 0.0;
}

int Basis::shapes_per_cell() const {
  switch (degree_) {
    case BasisDegree::constant: return 1;
    case BasisDegree::linear: return 2;
    case BasisDegree::cubic: return 4;
  }
  return 0;
}

int Basis::cell_basis(int p, int c, int m) const {
  const int n = counts_[p];
  int j = c;
  switch (degree_) {
    case BasisDegree::constant: j = c; break;
    case BasisDegree::linear: j = c + m; break;
    case BasisDegree::cubic: j = c + 2 - m; break;
  }
  return ((j % n) + n) % n;
}

double Basis::shape(int m, double u) const {
  switch (degree_) {
    case BasisDegree::constant: return 1.0;
    case BasisDegree::linear: return m == 0 ? 1.0 - u : u;
    case BasisDegree::cubic: {
      const double u2 = u * u;
      const double u3 = u2 * u;
      switch (m) {
        case 0: return u3 / 6.0;
        case 1: return (-3.0 * u3 + 3.0 * u2 + 3.0 * u + 1.0) / 6.0;
        case 2: return (3.0 * u3 - 6.0 * u2 + 4.0) / 6.0;
        default: {
          const double v = 1.0 - u;
          return v * v * v / 6.0;
        }
      }
    }
  }
  return 0.0;
}

double Basis::value(int g, GlobalParam tau) const {
  const auto [p, j] = local_index(g);
  if (tau.obstacle != p) return 0.0;
  const double n = counts_[p];
  const double x = periodic_diff(tau.t, center(g).t) * n;
  switch (degree_) {
    case BasisDegree::constant: return (x >= -0.5 && x < 0.5) ? 1.0 : 0.0;
    case BasisDegree::linear: return std::max(0.0, 1.0 - std::abs(x));
    case BasisDegree::cubic: return cubic_bspline(x);
  }
  return 0.0;
}

namespace {

std::vector<int> counts_from_ppw(const Scene& scene, double k, double ppw) {
  if (!(ppw > 0.0) || !std::isfinite(ppw)) {
    throw std::invalid_argument("points per wavelength must be positive");
  }
  std::vector<int> counts;
  for (const auto& curve : scene.obstacles()) {
    // The length is a quadrature value; do not let rounding bump an exact count.
    const double n = std::ceil(ppw * curve.length() * k / kTwoPi * (1.0 - 1e-12));
    counts.push_back(std::max(kMinCells, static_cast<int>(n)));
  }
  return counts;
}

}  // namespace

Discretization::Discretization(Scene scene, Wavenumber k, double ppw,
                               BasisDegree degree)
    : scene_(std::move(scene)),
      k_(k),
      ppw_(ppw),
      basis_(degree, counts_from_ppw(scene_, k.value(), ppw)) {
  init_collocation();
}

Discretization::Discretization(Scene scene, Wavenumber k, std::vector<int> counts,
                               BasisDegree degree)
    : scene_(std::move(scene)), k_(k), basis_(degree, std::move(counts)) {
  if (basis_.obstacles() != scene_.size()) {
    throw std::invalid_argument("one basis count per obstacle required");
  }
  const double mean_h = scene_.obstacle(0).length() / basis_.count(0);
  ppw_ = k_.wavelength() / mean_h;
  init_collocation();
}

void Discretization::init_collocation() {
  collocation_.clear();
  collocation_.reserve(basis_.size());
  const double shift = basis_.degree() == BasisDegree::constant ? 0.5 : 0.0;
  for (int p = 0; p < basis_.obstacles(); ++p) {
    const int n = basis_.count(p);
    for (int i = 0; i < n; ++i) collocation_.push_back({p, (i + shift) / n});
  }
}

BoundaryIntegrator::BoundaryIntegrator(const Discretization& disc) : disc_(&disc) {
  const Basis& basis = disc.basis();
  const Scene& scene = disc.scene();
  shapes_ = basis.shapes_per_cell();
  const int obstacles = basis.obstacles();
  points_per_cell_.resize(obstacles);
  cell_offsets_.resize(obstacles);
  cell_arc_.assign(basis.size(), 0.0);

  std::size_t total = 0;
  for (int p = 0; p < obstacles; ++p) {
    const double h_arc = scene.obstacle(p).length() / basis.count(p);
    points_per_cell_[p] =
        std::max(8, static_cast<int>(std::ceil(3.0 * disc.k() * h_arc)));
    cell_offsets_[p] = total;
    total += static_cast<std::size_t>(basis.count(p)) * points_per_cell_[p];
  }
  node_pos_.resize(total);
  node_weight_.resize(total);
  node_shape_.resize(total * shapes_);

  for (int p = 0; p < obstacles; ++p) {
    const ParamCurve& curve = scene.obstacle(p);
    const int n = basis.count(p);
    const double h = basis.cell_length(p);
    const QuadratureRule& rule = gauss_legendre(points_per_cell_[p]);
    for (int c = 0; c < n; ++c) {
      std::size_t idx = node_offset({p, c});
      double arc = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q, ++idx) {
        const double u = 0.5 * (1.0 + rule.nodes[q]);
        const double tau = (c + u) * h;
        node_pos_[idx] = curve.position(tau);
        node_weight_[idx] = 0.5 * rule.weights[q] * h * curve.speed(tau);
        arc += node_weight_[idx];
        for (int m = 0; m < shapes_; ++m) {
          node_shape_[idx * shapes_ + m] = basis.shape(m, u);
        }
      }
      cell_arc_[basis.offset(p) + c] = arc;
    }
  }
}

void BoundaryIntegrator::cell_integrals_rule(const Target& target, CellRef cell,
                                             const IntervalRule& local_rule,
                                             Complex* out) const {
  const Basis& basis = disc_->basis();
  const ParamCurve& curve = disc_->scene().obstacle(cell.obstacle);
  const double h = basis.cell_length(cell.obstacle);
  const double k = disc_->k();
  Complex acc[4] = {};
  for (std::size_t q = 0; q < local_rule.nodes.size(); ++q) {
    const double u = local_rule.nodes[q];
    const double tau = (cell.cell + u) * h;
    const double r = distance(target.x, curve.position(tau));
    if (!(r > 0.0)) continue;
    const Complex g = hankel1_0(k * r) * (local_rule.weights[q] * h * curve.speed(tau));
    for (int m = 0; m < shapes_; ++m) acc[m] += g * basis.shape(m, u);
  }
  const Complex factor(0.0, 0.25);
  for (int m = 0; m < shapes_; ++m) out[m] = factor * acc[m];
}

void BoundaryIntegrator::cell_integrals(const Target& target, CellRef cell,
                                        Complex* out) const {
  const Basis& basis = disc_->basis();
  const int p = cell.obstacle;

  if (target.on_boundary && target.t.obstacle == p) {
    // Offset of the target from the cell start, in cell units.
    const double d =
        periodic_diff(target.t.t, cell.cell * basis.cell_length(p)) * basis.count(p);
    if (d > -1.0 && d < 2.0) {
      IntervalRule rule;
      if (d > 0.0 && d < 1.0) {
        append_graded(rule, d, 0.0, kGradedLevels, kGradedRatio, kGradedPoints);
        append_graded(rule, d, 1.0, kGradedLevels, kGradedRatio, kGradedPoints);
      } else if (d <= 0.0) {
        append_graded(rule, 0.0, 1.0, kGradedLevels, kGradedRatio, kGradedPoints);
      } else {
        append_graded(rule, 1.0, 0.0, kGradedLevels, kGradedRatio, kGradedPoints);
      }
      cell_integrals_rule(target, cell, rule, out);
      return;
    }
  }

  const int nq = points_per_cell_[p];
  const std::size_t base = node_offset(cell);
  thread_local std::vector<double> radii;
  radii.resize(nq);
  double r_min = std::numeric_limits<double>::infinity();
  int q_min = 0;
  for (int q = 0; q < nq; ++q) {
    radii[q] = distance(target.x, node_pos_[base + q]);
    if (radii[q] < r_min) {
      r_min = radii[q];
      q_min = q;
    }
  }

  const double arc = cell_arc_[basis.offset(p) + cell.cell];
  if (r_min < kNearFactor * arc) {
    const double u_near = 0.5 * (1.0 + gauss_legendre(nq).nodes[q_min]);
    const double ratio = arc / std::max(r_min, 1e-300);
    const int levels = std::clamp(
        static_cast<int>(std::ceil(std::log2(std::max(ratio, 1.0)))) + 3, 3, 40);
    IntervalRule rule;
    append_graded(rule, u_near, 0.0, levels, 0.5, kNearPoints);
    append_graded(rule, u_near, 1.0, levels, 0.5, kNearPoints);
    cell_integrals_rule(target, cell, rule, out);
    return;
  }

  const double k = disc_->k();
  Complex acc[4] = {};
  for (int q = 0; q < nq; ++q) {
    const std::size_t idx = base + q;
    const Complex g = hankel1_0(k * radii[q]) * node_weight_[idx];
    const double* shape = &node_shape_[idx * shapes_];
    for (int m = 0; m < shapes_; ++m) acc[m] += g * shape[m];
  }
  const Complex factor(0.0, 0.25);
  for (int m = 0; m < shapes_; ++m) out[m] = factor * acc[m];
}

void BoundaryIntegrator::row(GlobalParam t, std::span<Complex> out) const {
  const Basis& basis = disc_->basis();
  if (static_cast<int>(out.size()) != basis.size()) {
    throw std::invalid_argument("row buffer has wrong length");
  }
  std::fill(out.begin(), out.end(), Complex{});
  const Target target{disc_->scene().position(t), true, t};
  Complex local[4];
  for (int p = 0; p < basis.obstacles(); ++p) {
    const int off = basis.offset(p);
    for (int c = 0; c < basis.count(p); ++c) {
      cell_integrals(target, {p, c}, local);
      for (int m = 0; m < shapes_; ++m) out[off + basis.cell_basis(p, c, m)] += local[m];
    }
  }
}

void BoundaryIntegrator::row_cells(GlobalParam t, std::span<const CellRef> cells,
                                   std::span<Complex> out) const {
  const Basis& basis = disc_->basis();
  const Target target{disc_->scene().position(t), true, t};
  Complex local[4];
  for (const CellRef& cell : cells) {
    cell_integrals(target, cell, local);
    const int off = basis.offset(cell.obstacle);
    for (int m = 0; m < shapes_; ++m) {
      out[off + basis.cell_basis(cell.obstacle, cell.cell, m)] += local[m];
    }
  }
}

Complex BoundaryIntegrator::potential_on_boundary(GlobalParam t,
                                                  const CVector& c) const {
  std::vector<Complex> buffer(disc_->size());
  row(t, buffer);
  Complex sum = 0.0;
  for (int j = 0; j < disc_->size(); ++j) sum += buffer[j] * c[j];
  return sum;
}

BoundaryIntegrator::FieldValue BoundaryIntegrator::potential(Vec2 x,
                                                             const CVector& c) const {
  const Basis& basis = disc_->basis();
  if (c.size() != basis.size()) throw std::invalid_argument("density has wrong length");
  const Target target{x, false, {}};
  FieldValue result{Complex{}, false};
  Complex local[4];
  for (int p = 0; p < basis.obstacles(); ++p) {
    const int off = basis.offset(p);
    const int nq = points_per_cell_[p];
    for (int cell = 0; cell < basis.count(p); ++cell) {
      const std::size_t base = node_offset({p, cell});
      double r_min = std::numeric_limits<double>::infinity();
      for (int q = 0; q < nq; ++q) {
        r_min = std::min(r_min, distance(x, node_pos_[base + q]));
      }
      if (r_min < cell_arc_[off + cell]) result.near_boundary = true;
      cell_integrals(target, {p, cell}, local);
      for (int m = 0; m < shapes_; ++m) {
        result.value += local[m] * c[off + basis.cell_basis(p, cell, m)];
      }
    }
  }
  return result;
}

CMatrix assemble_matrix(const Discretization& disc) {
  const int n = disc.size();
  CMatrix A(n, n);
  const BoundaryIntegrator integrator(disc);
  const auto& points = disc.collocation();
#pragma omp parallel
  {
    std::vector<Complex> buffer(n);
#pragma omp for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
      integrator.row(points[i], buffer);
      for (int j = 0; j < n; ++j) A(i, j) = buffer[j];
    }
  }
  return A;
}

CVector assemble_rhs(const Discretization& disc, const IncidentWave& wave) {
  const int n = disc.size();
  CVector b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = -eval_incident(wave, disc.k(), disc.scene().position(disc.collocation()[i]));
  }
  return b;
}

DenseSystem assemble_system(const Discretization& disc, const IncidentWave& wave) {
  return {assemble_matrix(disc), assemble_rhs(disc, wave)};
}

Complex evaluate_density(const Discretization& disc, const CVector& c,
                         GlobalParam tau) {
  const Basis& basis = disc.basis();
  if (c.size() != basis.size()) throw std::invalid_argument("density has wrong length");
  const int p = tau.obstacle;
  const int n = basis.count(p);
  const double x = wrap_unit(tau.t) * n;
  const int cell = std::min(n - 1, static_cast<int>(std::floor(x)));
  const double u = x - cell;
  Complex sum = 0.0;
  for (int m = 0; m < basis.shapes_per_cell(); ++m) {
    sum += c[basis.offset(p) + basis.cell_basis(p, cell, m)] * basis.shape(m, u);
  }
  return sum;
}

}  // namespace ascbem
