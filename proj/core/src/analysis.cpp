#include "ascbem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ascbem {

namespace {

void put(std::ostream& out, const char* key, double value) {
  out << key << " = " << std::setprecision(17) << value << '\n';
}

template <typename T>
void put(std::ostream& out, const char* key, const std::optional<T>& value) {
  if (value) out << key << " = " << std::setprecision(17) << *value << '\n';
}

}  // namespace

void write_metrics(std::ostream& out, const MetricsRecord& r) {
  const auto precision = out.precision();
  put(out, "k", r.k);
  out << "n = " << r.n << '\n';
  put(out, "nnz_fraction", r.nnz_fraction);
  put(out, "residual_dense", r.residual_dense);
  put(out, "residual_compressed", r.residual_compressed);
  put(out, "coefficient_error", r.coefficient_error);
  put(out, "interior_error", r.interior_error);
  put(out, "cond_dense", r.cond_dense);
  put(out, "cond_compressed", r.cond_compressed);
  put(out, "gmres_dense", r.gmres_dense);
  put(out, "gmres_compressed", r.gmres_compressed);
  out.precision(precision);
}

void write_metrics(std::ostream& out, const std::vector<MetricsRecord>& records) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0) out << '\n';
    write_metrics(out, records[i]);
  }
}

std::vector<MetricsRecord> read_metrics(std::istream& in) {
  std::vector<MetricsRecord> records;
  bool open = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      open = false;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("metrics: missing '=': " + line);
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream value(line.substr(eq + 1));
    if (!open) {
      records.emplace_back();
      open = true;
    }
    MetricsRecord& r = records.back();
    double x = 0.0;
    if (!(value >> x)) throw std::runtime_error("metrics: bad value for " + key);
    if (key == "k") r.k = x;
    else if (key == "n") r.n = static_cast<int>(x);
    else if (key == "nnz_fraction") r.nnz_fraction = x;
    else if (key == "residual_dense") r.residual_dense = x;
    else if (key == "residual_compressed") r.residual_compressed = x;
    else if (key == "coefficient_error") r.coefficient_error = x;
    else if (key == "interior_error") r.interior_error = x;
    else if (key == "cond_dense") r.cond_dense = x;
    else if (key == "cond_compressed") r.cond_compressed = x;
    else if (key == "gmres_dense") r.gmres_dense = static_cast<int>(x);
    else if (key == "gmres_compressed") r.gmres_compressed = static_cast<int>(x);
    else throw std::runtime_error("metrics: unknown key " + key);
  }
  return records;
}

void write_timings(std::ostream& out, const std::vector<MetricsRecord>& records) {
  const auto precision = out.precision();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i > 0) out << '\n';
    put(out, "k", records[i].k);
    for (const auto& [phase, seconds] : records[i].timings) {
      out << phase << " = " << std::setprecision(6) << seconds << '\n';
    }
  }
  out.precision(precision);
}

std::vector<FieldValue> scattered_field(const Discretization& disc, const CVector& c,
                                        const std::vector<Vec2>& points) {
  const BoundaryIntegrator integrator(disc);
  std::vector<FieldValue> values(points.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t i = 0; i < points.size(); ++i) {
    values[i] = integrator.potential(points[i], c);
  }
  return values;
}

double boundary_residual(const Discretization& disc, const CVector& c,
                         const IncidentWave& wave, std::uint64_t seed, int count) {
  if (c.size() != disc.size()) throw std::invalid_argument("density has wrong length");
  const Scene& scene = disc.scene();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, scene.size());
  std::vector<GlobalParam> samples;
  const auto& nodes = disc.collocation();
  while (static_cast<int>(samples.size()) < count) {
    const GlobalParam g = scene.to_local(uniform(rng));
    const bool on_node = std::any_of(nodes.begin(), nodes.end(), [&](const GlobalParam& t) {
      return t.obstacle == g.obstacle && t.t == g.t;
    });
    if (!on_node) samples.push_back(g);
  }
  const BoundaryIntegrator integrator(disc);
  std::vector<double> error(count);
  std::vector<double> reference(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < count; ++s) {
    const Complex u_inc = eval_incident(wave, disc.k(), scene.position(samples[s]));
    const Complex u_s = integrator.potential_on_boundary(samples[s], c);
    error[s] = std::abs(u_s + u_inc);
    reference[s] = std::abs(u_inc);
  }
  double num = 0.0;
  double den = 0.0;
  for (int s = 0; s < count; ++s) {
    num += error[s];
    den += reference[s];
  }
  return den > 0.0 ? num / den : num;
}

namespace {

double boundary_distance(const std::vector<std::vector<Vec2>>& polylines, Vec2 x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& poly : polylines) {
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2 a = poly[i];
      const Vec2 b = poly[(i + 1) % m];
      const Vec2 ab = b - a;
      const double len2 = dot(ab, ab);
      const double s = len2 > 0.0 ? std::clamp(dot(x - a, ab) / len2, 0.0, 1.0) : 0.0;
      best = std::min(best, distance(x, a + s * ab));
    }
  }
  return best;
}

}  // namespace

std::vector<Vec2> sample_interior_points(const Scene& scene, int count,
                                         std::uint64_t seed, double margin) {
  std::vector<std::vector<Vec2>> polylines;
  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = x0;
  double y1 = -x0;
  for (const auto& curve : scene.obstacles()) {
    polylines.push_back(curve.sample(2048));
    for (const Vec2& v : polylines.back()) {
      x0 = std::min(x0, v.x);
      x1 = std::max(x1, v.x);
      y0 = std::min(y0, v.y);
      y1 = std::max(y1, v.y);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(x0, x1);
  std::uniform_real_distribution<double> uy(y0, y1);
  std::vector<Vec2> points;
  long attempts = 0;
  while (static_cast<int>(points.size()) < count) {
    if (++attempts > 1000L * count + 100000L) {
      throw std::runtime_error("could not place interior sample points");
    }
    const Vec2 x{ux(rng), uy(rng)};
    if (!scene.contains(x)) continue;
    if (boundary_distance(polylines, x) < margin) continue;
    points.push_back(x);
  }
  return points;
}

double interior_extinction(const Discretization& disc, const CVector& c,
                           const IncidentWave& wave, const std::vector<Vec2>& points) {
  double max_inc = 0.0;
  const Scene& scene = disc.scene();
  for (int p = 0; p < scene.size(); ++p) {
    for (const Vec2& x : scene.obstacle(p).sample(4096)) {
      max_inc = std::max(max_inc, std::abs(eval_incident(wave, disc.k(), x)));
    }
  }
  const auto field = scattered_field(disc, c, points);
  double mean = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    mean += std::abs(field[i].value + eval_incident(wave, disc.k(), points[i]));
  }
  mean /= std::max<std::size_t>(points.size(), 1);
  return max_inc > 0.0 ? mean / max_inc : mean;
}

MieDensity::MieDensity(Vec2 center, double radius, double k, const PlaneWave& wave,
                       int truncation) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const double ka = Wavenumber(k).value() * radius;
  if (truncation <= 0) truncation = static_cast<int>(std::ceil(ka)) + 30;
  if (truncation > kMaxBesselOrder) {
    throw std::out_of_range("Mie truncation exceeds the supported Bessel order");
  }
  const Vec2 d = wave.direction * (1.0 / norm(wave.direction));
  alpha_ = std::atan2(d.y, d.x);
  const Complex i_unit(0.0, 1.0);
  prefactor_ = wave.amplitude * (2.0 * i_unit / (kPi * radius)) *
               std::exp(i_unit * (k * dot(d, center)));
  Complex i_pow = 1.0;
  for (int n = 0; n <= truncation; ++n) {
    const Complex h = hankel1(n, ka);
    coefficients_.push_back((n == 0 ? 1.0 : 2.0) * i_pow / h);
    i_pow *= i_unit;
  }
}

Complex MieDensity::operator()(double t) const {
  const double phi = kTwoPi * t - alpha_;
  Complex sum = 0.0;
  for (std::size_t n = 0; n < coefficients_.size(); ++n) {
    sum += coefficients_[n] * std::cos(static_cast<double>(n) * phi);
  }
  return prefactor_ * sum;
}

double MieDensity::tail() const { return std::abs(prefactor_ * coefficients_.back()); }

double density_error(const Discretization& disc, const CVector& c, const MieDensity& mie) {
  double num = 0.0;
  double den = 0.0;
  for (const GlobalParam& t : disc.collocation()) {
    const Complex exact = mie(t.t);
    num += std::norm(evaluate_density(disc, c, t) - exact);
    den += std::norm(exact);
  }
  return std::sqrt(num / den);
}

SparsityStats sparsity_stats(const SparseComplexMatrix& M) {
  SparsityStats stats;
  stats.nnz = M.nnz();
  stats.fraction = M.fill_fraction();
  if (M.size() == 0) return stats;
  stats.min_row = M.row_nnz(0);
  for (int i = 0; i < M.size(); ++i) {
    stats.min_row = std::min(stats.min_row, M.row_nnz(i));
    stats.max_row = std::max(stats.max_row, M.row_nnz(i));
  }
  return stats;
}

FieldGrid total_field_grid(const Discretization& disc, const CVector& c,
                           const IncidentWave& wave, int nx, int ny, double x0,
                           double x1, double y0, double y1) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("field grid needs nx, ny >= 2");
  FieldGrid grid{nx, ny, x0, x1, y0, y1, {}};
  std::vector<Vec2> points;
  points.reserve(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      points.push_back({x0 + (x1 - x0) * ix / (nx - 1), y0 + (y1 - y0) * iy / (ny - 1)});
    }
  }
  const auto field = scattered_field(disc, c, points);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  grid.values.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (field[i].near_boundary) {
      grid.values.emplace_back(nan, nan);
    } else {
      grid.values.push_back(field[i].value + eval_incident(wave, disc.k(), points[i]));
    }
  }
  return grid;
}

void write_field_grid(std::ostream& out, const FieldGrid& grid) {
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << grid.nx << ' ' << grid.ny << ' ' << grid.x0 << ' ' << grid.x1 << ' ' << grid.y0
      << ' ' << grid.y1 << '\n';
  for (const Complex& v : grid.values) out << v.real() << ' ' << v.imag() << '\n';
  out.precision(precision);
}

}  // namespace ascbem
