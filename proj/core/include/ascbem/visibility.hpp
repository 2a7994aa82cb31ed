#pragma once

#include <vector>

#include "ascbem/discretization.hpp"
#include "ascbem/windows.hpp"

namespace ascbem {

struct VisibilityConfig {
  /// Decay length of visibility windows.
  double T_vis = 0.15;
  /// Polyline points per obstacle: max(min_points, points_per_unknown * N).
  int min_points = 1024;
  int points_per_unknown = 8;
  /// Points on the same obstacle closer than this (parameter units) always
  /// see each other.
  double local_radius = 0.01;

  int resolution(int unknowns) const;
  /// Throws std::invalid_argument.
  void validate() const;
};

/// Occlusion tests against polyline approximations of the obstacles.
class VisibilityOracle {
 public:
  VisibilityOracle(const Scene& scene, int points_per_obstacle, double local_radius);

  const Scene& scene() const { return *scene_; }

  /// True when the open segment kappa(t) -> kappa(tau) leaves both endpoints
  /// toward the exterior and crosses no obstacle.
  bool visible(GlobalParam t, GlobalParam tau) const;
  /// Direct illumination by a plane wave or point source; superpositions are
  /// lit when any component is.
  bool illuminated(const IncidentWave& wave, GlobalParam t) const;
  /// True when some of `samples` uniformly spaced points of obstacle q is
  /// visible from t.
  bool sees_obstacle(GlobalParam t, int q, int samples) const;
  /// Visibility with obstacle tau.obstacle as the only occluder: the segment
  /// leaves kappa(tau) toward the exterior and does not cross that curve.
  /// Other obstacles, including the one carrying t, are ignored.
  bool faces(GlobalParam t, GlobalParam tau) const;
  /// t is lit by obstacle q when every sampled point of q facing t is also
  /// visible from t in the full scene.
  bool lit_by(GlobalParam t, int q, int samples) const;
  /// True when the path from kappa(t) toward some wave component crosses q.
  bool shadowed_by(const IncidentWave& wave, GlobalParam t, int q) const;

 private:
  struct Chunk {
    int obstacle;
    int first;
    int last;  // exclusive
    Vec2 lo;
    Vec2 hi;
  };
  // only_obstacle < 0 tests every obstacle.
  bool segment_clear(Vec2 a, Vec2 b, const GlobalParam* ends, int end_count,
                     int only_obstacle = -1) const;

  const Scene* scene_;
  int points_;
  double local_radius_;
  std::vector<std::vector<Vec2>> polylines_;
  std::vector<Chunk> chunks_;
};

bool visible(const Scene& scene, GlobalParam t, GlobalParam tau,
             const VisibilityConfig& cfg = {});
bool illuminated(const Scene& scene, const IncidentWave& wave, GlobalParam t,
                 const VisibilityConfig& cfg = {});

/// Rows not lit by the wave get the trivial window everywhere. For a lit row
/// on obstacle p:
///  - the block toward p keeps the runs of visible basis centers plus the
///    singularity window, but only when the row is lit by every other
///    obstacle; otherwise it is full;
///  - the block toward q != p keeps the runs of centers of q facing the row,
///    unless the row lies in the shadow q casts, in which case it is full.
/// Runs are dilated by T_vis. Occlusion by p is deliberately ignored in the
/// cross block: the integral over q does not know about p, and dropping its
/// occluded part breaks the cancellation that forms p's own shadow.
WindowSet visibility_windows(const Scene& scene, const IncidentWave& wave,
                             const Discretization& disc, const VisibilityConfig& cfg);

}  // namespace ascbem
