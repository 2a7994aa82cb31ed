#include "ascbem/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ascbem/compression.hpp"

namespace ascbem {

namespace {

constexpr int kChunkSegments = 32;

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) &&
         ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0));
}

// Maximal runs of kept centers (cyclic) widened by T on both sides, plus the
// singularity window at *t when given.
CompoundWindow dilated_runs(const std::vector<char>& keep, double shift, double T,
                            const double* t) {
  const int count = static_cast<int>(keep.size());
  const int kept = static_cast<int>(std::count(keep.begin(), keep.end(), 1));
  if (kept == count) return CompoundWindow::full();
  std::vector<ElementaryWindow> pieces;
  if (kept > 0) {
    int start = 0;
    while (keep[start]) ++start;
    for (int s = 1; s <= count; ++s) {
      if (!keep[(start + s) % count]) continue;
      const int first = start + s;
      int last = first;
      while (last + 1 < start + count && keep[(last + 1) % count]) ++last;
      const double a = (first + shift) / count;
      const double b = (last + shift) / count;
      if (b - a + 2.0 * T >= 1.0) return CompoundWindow::full();
      pieces.push_back(ElementaryWindow::make(a - T, a, b, b + T));
      s += last - first;
    }
  }
  if (t) pieces.push_back(singularity_window(*t, T));
  return merge_windows(std::move(pieces), 0.5 * T);
}

}  // namespace

int VisibilityConfig::resolution(int unknowns) const {
  return std::max(min_points, points_per_unknown * unknowns);
}

void VisibilityConfig::validate() const {
  if (!(T_vis > 0.0 && T_vis < 0.25)) throw std::invalid_argument("T_vis must lie in (0, 0.25)");
  if (min_points < 256) throw std::invalid_argument("visibility resolution must be >= 256");
  if (points_per_unknown < 1) throw std::invalid_argument("points_per_unknown must be >= 1");
  if (!(local_radius >= 0.0 && local_radius < 0.25)) {
    throw std::invalid_argument("local_radius must lie in [0, 0.25)");
  }
}

VisibilityOracle::VisibilityOracle(const Scene& scene, int points_per_obstacle,
                                   double local_radius)
    : scene_(&scene), points_(points_per_obstacle), local_radius_(local_radius) {
  if (points_per_obstacle < 16) throw std::invalid_argument("too few polyline points");
  for (int p = 0; p < scene.size(); ++p) {
    polylines_.push_back(scene.obstacle(p).sample(points_));
    const auto& poly = polylines_.back();
    for (int first = 0; first < points_; first += kChunkSegments) {
      const int last = std::min(points_, first + kChunkSegments);
      Chunk chunk{p, first, last, poly[first], poly[first]};
      for (int s = first; s <= last; ++s) {
        const Vec2 v = poly[s % points_];
        chunk.lo = {std::min(chunk.lo.x, v.x), std::min(chunk.lo.y, v.y)};
        chunk.hi = {std::max(chunk.hi.x, v.x), std::max(chunk.hi.y, v.y)};
      }
      chunks_.push_back(chunk);
    }
  }
}

bool VisibilityOracle::segment_clear(Vec2 a, Vec2 b, const GlobalParam* ends,
                                     int end_count, int only_obstacle) const {
  const Vec2 lo{std::min(a.x, b.x), std::min(a.y, b.y)};
  const Vec2 hi{std::max(a.x, b.x), std::max(a.y, b.y)};
  // Segments touching an endpoint's own curve neighborhood are skipped.
  const double exclude = 2.0 / points_;
  for (const Chunk& chunk : chunks_) {
    if (only_obstacle >= 0 && chunk.obstacle != only_obstacle) continue;
    if (chunk.hi.x < lo.x || chunk.lo.x > hi.x || chunk.hi.y < lo.y || chunk.lo.y > hi.y) {
      continue;
    }
    const auto& poly = polylines_[chunk.obstacle];
    for (int s = chunk.first; s < chunk.last; ++s) {
      bool skip = false;
      for (int e = 0; e < end_count; ++e) {
        if (ends[e].obstacle != chunk.obstacle) continue;
        const double mid = (s + 0.5) / points_;
        if (periodic_distance(mid, ends[e].t) < exclude) skip = true;
      }
      if (skip) continue;
      if (segments_cross(a, b, poly[s], poly[(s + 1) % points_])) return false;
    }
  }
  return true;
}

bool VisibilityOracle::visible(GlobalParam t, GlobalParam tau) const {
  if (t.obstacle == tau.obstacle && periodic_distance(t.t, tau.t) < local_radius_) {
    return true;
  }
  const Vec2 a = scene_->position(t);
  const Vec2 b = scene_->position(tau);
  const Vec2 v = b - a;
  if (dot(v, scene_->normal(t)) <= 0.0 || dot(v, scene_->normal(tau)) >= 0.0) return false;
  const GlobalParam ends[2] = {t, tau};
  return segment_clear(a, b, ends, 2);
}

bool VisibilityOracle::illuminated(const IncidentWave& wave, GlobalParam t) const {
  const Vec2 x = scene_->position(t);
  const Vec2 n = scene_->normal(t);
  const double reach = 4.0 * (scene_->diameter() + norm(x)) + 1.0;
  for (const auto& part : wave.parts()) {
    bool lit = false;
    if (const auto* plane = std::get_if<PlaneWave>(&part)) {
      const Vec2 d = plane->direction * (1.0 / norm(plane->direction));
      lit = dot(n, d) < 0.0 && segment_clear(x, x - d * reach, &t, 1);
    } else {
      const auto& source = std::get<PointSource>(part);
      lit = dot(n, x - source.source) < 0.0 && segment_clear(source.source, x, &t, 1);
    }
    if (lit) return true;
  }
  return false;
}

bool VisibilityOracle::sees_obstacle(GlobalParam t, int q, int samples) const {
  for (int s = 0; s < samples; ++s) {
    if (visible(t, {q, static_cast<double>(s) / samples})) return true;
  }
  return false;
}

bool VisibilityOracle::faces(GlobalParam t, GlobalParam tau) const {
  const Vec2 a = scene_->position(t);
  const Vec2 b = scene_->position(tau);
  if (dot(a - b, scene_->normal(tau)) <= 0.0) return false;
  return segment_clear(a, b, &tau, 1, tau.obstacle);
}

bool VisibilityOracle::lit_by(GlobalParam t, int q, int samples) const {
  bool any = false;
  for (int s = 0; s < samples; ++s) {
    const GlobalParam tau{q, static_cast<double>(s) / samples};
    if (!faces(t, tau)) continue;
    if (!visible(t, tau)) return false;
    any = true;
  }
  return any;
}

bool VisibilityOracle::shadowed_by(const IncidentWave& wave, GlobalParam t, int q) const {
  const Vec2 x = scene_->position(t);
  const double reach = 4.0 * (scene_->diameter() + norm(x)) + 1.0;
  for (const auto& part : wave.parts()) {
    Vec2 far;
    if (const auto* plane = std::get_if<PlaneWave>(&part)) {
      far = x - plane->direction * (reach / norm(plane->direction));
    } else {
      far = std::get<PointSource>(part).source;
    }
    if (!segment_clear(x, far, &t, 1, q)) return true;
  }
  return false;
}

bool visible(const Scene& scene, GlobalParam t, GlobalParam tau,
             const VisibilityConfig& cfg) {
  cfg.validate();
  return VisibilityOracle(scene, cfg.min_points, cfg.local_radius).visible(t, tau);
}

bool illuminated(const Scene& scene, const IncidentWave& wave, GlobalParam t,
                 const VisibilityConfig& cfg) {
  cfg.validate();
  return VisibilityOracle(scene, cfg.min_points, cfg.local_radius).illuminated(wave, t);
}

WindowSet visibility_windows(const Scene& scene, const IncidentWave& wave,
                             const Discretization& disc, const VisibilityConfig& cfg) {
  cfg.validate();
  const VisibilityOracle oracle(scene, cfg.resolution(disc.size()), cfg.local_radius);
  const Basis& basis = disc.basis();
  const int obstacles = scene.size();
  WindowSet ws(disc.collocation(), obstacles);
  const double T = cfg.T_vis;
  const double shift = basis.degree() == BasisDegree::constant ? 0.5 : 0.0;

#pragma omp parallel for schedule(dynamic, 4)
  for (int row = 0; row < disc.size(); ++row) {
    const GlobalParam t = disc.collocation()[row];
    const int p = t.obstacle;
    const bool lit = oracle.illuminated(wave, t);
    bool lit_by_all = true;
    for (int q = 0; q < obstacles && lit && lit_by_all; ++q) {
      if (q != p) lit_by_all = oracle.lit_by(t, q, std::max(64, basis.count(q)));
    }
    for (int q = 0; q < obstacles; ++q) {
      const bool compressed =
          lit && (q == p ? lit_by_all : !oracle.shadowed_by(wave, t, q));
      if (!compressed) {
        ws.window(row, q) = CompoundWindow::full();
        continue;
      }
      const int count = basis.count(q);
      std::vector<char> keep(count, 0);
      for (int j = 0; j < count; ++j) {
        const GlobalParam tau = basis.center(basis.offset(q) + j);
        if (q == p) {
          keep[j] = tau.t != t.t && oracle.visible(t, tau);
        } else {
          keep[j] = oracle.faces(t, tau);
        }
      }
      ws.window(row, q) = dilated_runs(keep, shift, T, q == p ? &t.t : nullptr);
    }
  }
  return ws;
}

}  // namespace ascbem
