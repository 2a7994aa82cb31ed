#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ascbem {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Wraps a parameter into [0, 1).
inline double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

/// Signed periodic difference a - b mapped into [-1/2, 1/2).
inline double periodic_diff(double a, double b) {
  double d = a - b;
  return d - std::floor(d + 0.5);
}

inline double periodic_distance(double a, double b) {
  return std::abs(periodic_diff(a, b));
}

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed counter-clockwise boundary curve parameterized over [0, 1).
class ParamCurve {
 public:
  using PointMap = std::function<Vec2(double)>;

  ParamCurve(PointMap position, PointMap derivative, std::string name = {});

  Vec2 position(double t) const { return position_(wrap_unit(t)); }
  Vec2 derivative(double t) const { return derivative_(wrap_unit(t)); }
  double speed(double t) const { return norm(derivative(t)); }
  /// Outward unit normal.
  Vec2 normal(double t) const;

  double length() const { return length_; }
  const std::string& name() const { return name_; }

  /// Closed polyline through `count` uniformly spaced parameter samples.
  std::vector<Vec2> sample(int count) const;

 private:
  PointMap position_;
  PointMap derivative_;
  std::string name_;
  double length_ = 0.0;
};

/// Radial curve center + r(theta) (cos theta, sin theta), theta = 2 pi t.
ParamCurve radial_curve(Vec2 center, std::function<double(double)> radius,
                        std::function<double(double)> radius_derivative,
                        std::string name);

ParamCurve ellipse_curve(Vec2 center, double semi_a, double semi_b,
                         double rotation, std::string name);

/// Location on a scene: obstacle index plus local parameter in [0, 1).
struct GlobalParam {
  int obstacle = 0;
  double t = 0.0;

  bool operator==(const GlobalParam&) const = default;
};

class Scene {
 public:
  Scene() = default;
  explicit Scene(std::vector<ParamCurve> obstacles);

  int size() const { return static_cast<int>(obstacles_.size()); }
  const ParamCurve& obstacle(int p) const { return obstacles_.at(p); }
  const std::vector<ParamCurve>& obstacles() const { return obstacles_; }

  Vec2 position(GlobalParam g) const { return obstacles_[g.obstacle].position(g.t); }
  Vec2 normal(GlobalParam g) const { return obstacles_[g.obstacle].normal(g.t); }
  double speed(GlobalParam g) const { return obstacles_[g.obstacle].speed(g.t); }

  /// Global parameter g = p + t with t in [0, 1).
  static double to_global(GlobalParam g) { return g.obstacle + g.t; }
  GlobalParam to_local(double g) const;

  /// Minimum distance between sampled points of different obstacles.
  double min_separation(int samples_per_curve = 1000) const;
  /// True when x lies strictly inside one of the obstacles (polyline test).
  bool contains(Vec2 x, int samples_per_curve = 2048) const;
  double diameter() const;

 private:
  std::vector<ParamCurve> obstacles_;
};

enum class ScenePreset {
  circle,
  ellipse,
  almost_convex,
  nonconvex_polygon,
  near_inclusion,
  two_circles,
  three_ellipses,
};

ScenePreset parse_scene_preset(std::string_view name);
std::string_view to_string(ScenePreset preset);

/// Parameters understood by the presets. Fields a preset does not use are
/// ignored.
struct SceneParams {
  Vec2 center{0.0, 0.0};
  double radius = 1.0;
  double semi_a = 1.0;
  double semi_b = 0.5;
  double epsilon = 0.12;
  double rotation = 0.0;
};

/// Builds a preset scene. Throws GeometryError for self-intersecting or
/// overlapping obstacles.
Scene preset_scene(ScenePreset preset, const SceneParams& params = {});

/// Throws GeometryError if a curve self-intersects or curves overlap.
void validate_scene(const Scene& scene, int samples_per_curve = 2048);

struct PlaneWave {
  Vec2 direction{1.0, 0.0};
  Complex amplitude{1.0, 0.0};
};

struct PointSource {
  Vec2 source{0.0, 0.0};
  Complex amplitude{1.0, 0.0};
};

/// Incident field; a superposition of plane waves and point sources.
class IncidentWave {
 public:
  using Part = std::variant<PlaneWave, PointSource>;

  static IncidentWave plane(Vec2 direction, Complex amplitude = 1.0);
  static IncidentWave point_source(Vec2 source, Complex amplitude = 1.0);
  static IncidentWave superposition(std::vector<IncidentWave> waves);
  /// Three unit plane waves whose directions differ by 2 pi / 3.
  static IncidentWave three_plane(double first_angle);

  const std::vector<Part>& parts() const { return parts_; }

  /// Throws GeometryError if a point source touches or sits inside an obstacle.
  void validate_against(const Scene& scene) const;

 private:
  std::vector<Part> parts_;
};

Complex eval_incident(const IncidentWave& wave, double k, Vec2 x);

}  // namespace ascbem
