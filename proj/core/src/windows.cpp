#include "ascbem/windows.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

namespace ascbem {

namespace {

constexpr double kExpLimit = 745.0;

// exp(2 e^{-1/u} / (u - 1)) for u in (0, 1): 1 at u -> 0, 0 at u -> 1.
double edge(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  const double exponent = 2.0 * std::exp(-1.0 / u) / (u - 1.0);
  if (exponent < -kExpLimit) return 0.0;
  return std::exp(exponent);
}

}  // namespace

double eval_chi(double tau, double lambda, double l, double r, double rho) {
  if (tau <= lambda || tau >= rho) return 0.0;
  if (tau >= l && tau <= r) return 1.0;
  if (tau < l) return edge((tau - l) / (lambda - l));
  return edge((tau - r) / (rho - r));
}

ElementaryWindow ElementaryWindow::make(double lambda, double l, double r, double rho) {
  if (!(lambda < l) || !(l <= r) || !(r < rho)) {
    throw std::invalid_argument("window needs lambda < l <= r < rho");
  }
  if (!(rho - lambda < 1.0)) {
    throw std::invalid_argument("window support must be shorter than the period");
  }
  const double shift = std::floor(lambda);
  return {lambda - shift, l - shift, r - shift, rho - shift};
}

double ElementaryWindow::eval(double tau) const {
  const double local = lambda + wrap_unit(tau - lambda);
  return eval_chi(local, lambda, l, r, rho);
}

CompoundWindow CompoundWindow::full() {
  CompoundWindow w;
  w.full_ = true;
  return w;
}

double CompoundWindow::eval(double tau) const {
  if (full_) return 1.0;
  for (const auto& w : windows_) {
    const double v = w.eval(tau);
    if (v > 0.0) return v;
  }
  return 0.0;
}

bool CompoundWindow::on_plateau(double tau) const { return eval(tau) == 1.0; }

double CompoundWindow::support_measure() const {
  if (full_) return 1.0;
  double total = 0.0;
  for (const auto& w : windows_) total += w.support();
  return total;
}

namespace {

ElementaryWindow join(const ElementaryWindow& a, const ElementaryWindow& b) {
  return {a.lambda, std::min(a.l, b.l), std::max(a.r, b.r), std::max(a.rho, b.rho)};
}

bool by_fields(const ElementaryWindow& a, const ElementaryWindow& b) {
  return std::tie(a.lambda, a.l, a.r, a.rho) < std::tie(b.lambda, b.l, b.r, b.rho);
}

}  // namespace

CompoundWindow merge_windows(std::vector<ElementaryWindow> windows, double eps_merge) {
  CompoundWindow result;
  if (windows.empty()) return result;
  for (auto& w : windows) {
    if (!(w.rho - w.lambda < 1.0)) return CompoundWindow::full();
    w = ElementaryWindow::make(w.lambda, w.l, w.r, w.rho);
  }
  std::sort(windows.begin(), windows.end(), by_fields);

  std::vector<ElementaryWindow> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.lambda - merged.back().rho < eps_merge) {
      merged.back() = join(merged.back(), w);
    } else {
      merged.push_back(w);
    }
  }

  // Across the seam: the last window may reach the first one shifted by a period.
  while (merged.size() > 1) {
    ElementaryWindow first = merged.front();
    first = {first.lambda + 1.0, first.l + 1.0, first.r + 1.0, first.rho + 1.0};
    if (first.lambda - merged.back().rho >= eps_merge) break;
    merged.back() = join(merged.back(), first);
    merged.erase(merged.begin());
  }
  for (const auto& w : merged) {
    if (w.rho - w.lambda + eps_merge > 1.0) return CompoundWindow::full();
  }

  for (auto& w : merged) w = ElementaryWindow::make(w.lambda, w.l, w.r, w.rho);
  std::sort(merged.begin(), merged.end(), by_fields);
  result.windows_ = std::move(merged);
  return result;
}

WindowSet::WindowSet(std::vector<GlobalParam> points, int obstacles)
    : obstacles_(obstacles),
      points_(std::move(points)),
      windows_(points_.size() * static_cast<std::size_t>(obstacles)) {
  if (obstacles < 1) throw std::invalid_argument("window set needs an obstacle");
  for (const auto& p : points_) {
    if (p.obstacle < 0 || p.obstacle >= obstacles) {
      throw std::invalid_argument("row point refers to an unknown obstacle");
    }
  }
  build_index();
}

void WindowSet::build_index() {
  index_.assign(obstacles_, {});
  for (int i = 0; i < rows(); ++i) {
    index_[points_[i].obstacle].emplace_back(wrap_unit(points_[i].t), i);
  }
  for (auto& list : index_) std::sort(list.begin(), list.end());
}

int WindowSet::match(GlobalParam t) const {
  if (t.obstacle < 0 || t.obstacle >= obstacles_ || index_[t.obstacle].empty()) {
    throw std::invalid_argument("no rows on the requested obstacle");
  }
  const auto& list = index_[t.obstacle];
  const double x = wrap_unit(t.t);
  const auto it = std::lower_bound(list.begin(), list.end(),
                                   std::make_pair(x, -1));
  const std::size_t n = list.size();
  const std::size_t hi = static_cast<std::size_t>(it - list.begin()) % n;
  const std::size_t lo = (hi + n - 1) % n;
  int best = -1;
  double best_d = 2.0;
  // Walk outward on both sides until the distance starts growing.
  for (int dir : {1, -1}) {
    const std::size_t start = dir > 0 ? hi : lo;
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t pos = dir > 0 ? (start + step) % n : (start + n - step) % n;
      const auto& entry = list[pos];
      const double d = periodic_distance(entry.first, x);
      if (d < best_d || (d == best_d && entry.second < best)) {
        best_d = d;
        best = entry.second;
      }
      if (d > best_d) break;
    }
  }
  return best;
}

void WindowSet::write(std::ostream& out) const {
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  out << "rows " << rows() << " obstacles " << obstacles_ << '\n';
  for (int i = 0; i < rows(); ++i) {
    out << "point " << i << ' ' << points_[i].obstacle << ' ' << points_[i].t << '\n';
  }
  for (int i = 0; i < rows(); ++i) {
    for (int q = 0; q < obstacles_; ++q) {
      const CompoundWindow& cw = window(i, q);
      if (cw.is_full()) {
        out << i << ' ' << q << " full\n";
        continue;
      }
      for (const auto& w : cw.windows()) {
        out << i << ' ' << q << ' ' << w.lambda << ' ' << w.l << ' ' << w.r << ' '
            << w.rho << '\n';
      }
    }
  }
  out << std::setprecision(static_cast<int>(old_precision));
}

WindowSet WindowSet::read(std::istream& in) {
  std::string word;
  int rows = 0;
  int obstacles = 0;
  std::string word2;
  if (!(in >> word >> rows >> word2 >> obstacles) || word != "rows" ||
      word2 != "obstacles" || rows < 0 || obstacles < 1) {
    throw std::runtime_error("window file: bad header");
  }
  std::vector<GlobalParam> points(rows);
  for (int i = 0; i < rows; ++i) {
    int index = 0;
    if (!(in >> word >> index >> points[i].obstacle >> points[i].t) ||
        word != "point" || index != i) {
      throw std::runtime_error("window file: bad point line " + std::to_string(i));
    }
  }
  WindowSet set(std::move(points), obstacles);
  std::vector<std::vector<ElementaryWindow>> pending(
      static_cast<std::size_t>(rows) * obstacles);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    int i = 0;
    int q = 0;
    if (!(fields >> i >> q) || i < 0 || i >= rows || q < 0 || q >= obstacles) {
      throw std::runtime_error("window file: bad window line: " + line);
    }
    std::string rest;
    fields >> rest;
    if (rest == "full") {
      set.window(i, q) = CompoundWindow::full();
      continue;
    }
    ElementaryWindow w;
    std::istringstream numbers(line);
    numbers >> i >> q >> w.lambda >> w.l >> w.r >> w.rho;
    if (!numbers) throw std::runtime_error("window file: bad window line: " + line);
    pending[static_cast<std::size_t>(i) * obstacles + q].push_back(w);
  }
  for (int i = 0; i < rows; ++i) {
    for (int q = 0; q < obstacles; ++q) {
      auto& list = pending[static_cast<std::size_t>(i) * obstacles + q];
      if (list.empty()) continue;
      // Stored windows are already disjoint; merging with zero proximity keeps them.
      set.window(i, q) = merge_windows(std::move(list), 0.0);
    }
  }
  return set;
}

}  // namespace ascbem
