#include "ascbem/geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <memory>

#include "ascbem/kernel.hpp"
#include "ascbem/quadrature.hpp"

namespace ascbem {

namespace {

double integrate_speed(const ParamCurve::PointMap& derivative, double a,
                       double b, const QuadratureRule& rule) {
  double sum = 0.0;
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    sum += rule.weights[q] * norm(derivative(mid + half * rule.nodes[q]));
  }
  return sum * half;
}

// Panel-wise Gauss-Legendre arc length; the integrand is smooth and periodic.
double curve_length(const ParamCurve::PointMap& derivative) {
  constexpr int kPanels = 512;
  const QuadratureRule& rule = gauss_legendre(16);
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    total += integrate_speed(derivative, double(p) / kPanels,
                             double(p + 1) / kPanels, rule);
  }
  return total;
}

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool point_in_polygon(Vec2 x, const std::vector<Vec2>& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > x.y) != (b.y > x.y)) {
      const double xc = a.x + (x.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x.x < xc) inside = !inside;
    }
  }
  return inside;
}

// Inverse of the arc-length function of a raw parameterization, so that the
// resulting curve has constant speed.
class ArcLengthMap {
 public:
  ArcLengthMap(ParamCurve::PointMap raw_derivative)
      : raw_derivative_(std::move(raw_derivative)),
        rule_(gauss_legendre(10)),
        cumulative_(kPanels + 1, 0.0) {
    for (int p = 0; p < kPanels; ++p) {
      cumulative_[p + 1] =
          cumulative_[p] + integrate_speed(raw_derivative_, double(p) / kPanels,
                                           double(p + 1) / kPanels, rule_);
    }
  }

  double length() const { return cumulative_.back(); }

  /// Raw parameter u with arc length S(u) = t * L.
  double raw_parameter(double t) const {
    const double target = t * length();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    int panel = int(it - cumulative_.begin()) - 1;
    panel = std::clamp(panel, 0, kPanels - 1);
    const double lo = double(panel) / kPanels;
    const double hi = double(panel + 1) / kPanels;
    double u = lo + (hi - lo) * (target - cumulative_[panel]) /
                        (cumulative_[panel + 1] - cumulative_[panel]);
    for (int iter = 0; iter < 8; ++iter) {
      const double residual =
          cumulative_[panel] + integrate_speed(raw_derivative_, lo, u, rule_) -
          target;
      const double step = residual / norm(raw_derivative_(u));
      u = std::clamp(u - step, lo, hi);
      if (std::abs(step) < 1e-15) break;
    }
    return u;
  }

 private:
  static constexpr int kPanels = 2048;
  ParamCurve::PointMap raw_derivative_;
  const QuadratureRule& rule_;
  std::vector<double> cumulative_;
};

ParamCurve arc_length_curve(ParamCurve::PointMap raw_position,
                            ParamCurve::PointMap raw_derivative,
                            std::string name) {
  auto map = std::make_shared<const ArcLengthMap>(raw_derivative);
  auto position = [map, raw_position](double t) {
    return raw_position(map->raw_parameter(t));
  };
  auto derivative = [map, raw_derivative](double t) {
    const Vec2 d = raw_derivative(map->raw_parameter(t));
    return d * (map->length() / norm(d));
  };
  return ParamCurve(std::move(position), std::move(derivative), std::move(name));
}

struct RadialFunction {
  std::function<double(double)> r;
  std::function<double(double)> dr;
};

std::pair<ParamCurve::PointMap, ParamCurve::PointMap> radial_maps(
    Vec2 center, RadialFunction f) {
  auto position = [center, r = f.r](double t) {
    const double th = kTwoPi * t;
    const double rr = r(th);
    return Vec2{center.x + rr * std::cos(th), center.y + rr * std::sin(th)};
  };
  auto derivative = [r = f.r, dr = f.dr](double t) {
    const double th = kTwoPi * t;
    const double c = std::cos(th);
    const double s = std::sin(th);
    const double rr = r(th);
    const double drr = dr(th);
    return Vec2{kTwoPi * (drr * c - rr * s), kTwoPi * (drr * s + rr * c)};
  };
  return {position, derivative};
}

// Vertices (angle in degrees, radius) of the star-shaped nonconvex polygon; the
// vertex at 144 degrees is pulled inward to create a reflex corner.
constexpr std::array<std::pair<double, double>, 6> kPolygonVertices{{
    {0.0, 1.0},
    {60.0, 0.95},
    {144.0, 0.42},
    {200.0, 1.0},
    {250.0, 0.9},
    {310.0, 1.05},
}};
constexpr int kPolygonFourierOrder = 20;

RadialFunction smoothed_polygon_radius(double scale) {
  std::vector<Vec2> verts;
  for (auto [deg, rad] : kPolygonVertices) {
    const double th = deg * kPi / 180.0;
    verts.push_back({rad * std::cos(th), rad * std::sin(th)});
  }
  // Radius of the polygon along direction th (ray-edge intersection).
  auto polygon_radius = [verts](double th) {
    const Vec2 dir{std::cos(th), std::sin(th)};
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const Vec2 a = verts[i];
      const Vec2 b = verts[(i + 1) % verts.size()];
      const double denom = cross(dir, b - a);
      if (std::abs(denom) < 1e-300) continue;
      const double s = cross(a, b - a) / denom;
      const double u = cross(a, dir) / denom;
      if (s > 0 && u >= -1e-12 && u <= 1 + 1e-12) return s;
    }
    return 1.0;
  };
  constexpr int kSamples = 4096;
  std::vector<double> a(kPolygonFourierOrder + 1, 0.0);
  std::vector<double> b(kPolygonFourierOrder + 1, 0.0);
  for (int s = 0; s < kSamples; ++s) {
    const double th = kTwoPi * (s + 0.5) / kSamples;
    const double r = polygon_radius(th);
    for (int n = 0; n <= kPolygonFourierOrder; ++n) {
      a[n] += r * std::cos(n * th);
      b[n] += r * std::sin(n * th);
    }
  }
  for (int n = 0; n <= kPolygonFourierOrder; ++n) {
    // Lanczos sigma factors suppress Gibbs ringing at the corners.
    const double x = kPi * n / (kPolygonFourierOrder + 1);
    const double sigma = n == 0 ? 1.0 : std::sin(x) / x;
    const double w = (n == 0 ? 1.0 : 2.0) / kSamples * sigma * scale;
    a[n] *= w;
    b[n] *= w;
  }
  auto r = [a, b](double th) {
    double v = 0.0;
    for (int n = 0; n <= kPolygonFourierOrder; ++n) {
      v += a[n] * std::cos(n * th) + b[n] * std::sin(n * th);
    }
    return v;
  };
  auto dr = [a, b](double th) {
    double v = 0.0;
    for (int n = 1; n <= kPolygonFourierOrder; ++n) {
      v += n * (b[n] * std::cos(n * th) - a[n] * std::sin(n * th));
    }
    return v;
  };
  return {r, dr};
}

// Circle with a deep smooth notch facing -x: r = R (1 - D exp(-x^6)),
// x = (theta - pi) / W.
constexpr double kNotchDepth = 0.75;
constexpr double kNotchHalfWidth = 0.32;

RadialFunction notched_radius(double scale) {
  auto r = [scale](double th) {
    const double x = (th - kPi) / kNotchHalfWidth;
    return scale * (1.0 - kNotchDepth * std::exp(-std::pow(x, 6)));
  };
  auto dr = [scale](double th) {
    const double x = (th - kPi) / kNotchHalfWidth;
    return scale * kNotchDepth * 6.0 * std::pow(x, 5) *
           std::exp(-std::pow(x, 6)) / kNotchHalfWidth;
  };
  return {r, dr};
}

}  // namespace

ParamCurve::ParamCurve(PointMap position, PointMap derivative, std::string name)
    : position_(std::move(position)),
      derivative_(std::move(derivative)),
      name_(std::move(name)) {
  length_ = curve_length(derivative_);
  if (!(length_ > 0.0) || !std::isfinite(length_)) {
    throw GeometryError("curve '" + name_ + "' has non-positive length");
  }
}

Vec2 ParamCurve::normal(double t) const {
  const Vec2 d = derivative(t);
  const double s = norm(d);
  return {d.y / s, -d.x / s};
}

std::vector<Vec2> ParamCurve::sample(int count) const {
  std::vector<Vec2> pts(count);
  for (int i = 0; i < count; ++i) pts[i] = position(double(i) / count);
  return pts;
}

ParamCurve radial_curve(Vec2 center, std::function<double(double)> radius,
                        std::function<double(double)> radius_derivative,
                        std::string name) {
  auto [pos, der] = radial_maps(center, {std::move(radius), std::move(radius_derivative)});
  return ParamCurve(std::move(pos), std::move(der), std::move(name));
}

ParamCurve ellipse_curve(Vec2 center, double semi_a, double semi_b,
                         double rotation, std::string name) {
  if (!(semi_a > 0.0) || !(semi_b > 0.0)) {
    throw GeometryError("ellipse semi-axes must be positive");
  }
  const double cr = std::cos(rotation);
  const double sr = std::sin(rotation);
  auto position = [=](double t) {
    const double th = kTwoPi * t;
    const double x = semi_a * std::cos(th);
    const double y = semi_b * std::sin(th);
    return Vec2{center.x + cr * x - sr * y, center.y + sr * x + cr * y};
  };
  auto derivative = [=](double t) {
    const double th = kTwoPi * t;
    const double x = -kTwoPi * semi_a * std::sin(th);
    const double y = kTwoPi * semi_b * std::cos(th);
    return Vec2{cr * x - sr * y, sr * x + cr * y};
  };
  return ParamCurve(position, derivative, std::move(name));
}

Scene::Scene(std::vector<ParamCurve> obstacles) : obstacles_(std::move(obstacles)) {
  if (obstacles_.empty()) throw GeometryError("scene has no obstacles");
}

GlobalParam Scene::to_local(double g) const {
  const double p = std::floor(g);
  int idx = static_cast<int>(p);
  double t = g - p;
  if (t >= 1.0) {
    t = 0.0;
    ++idx;
  }
  if (idx < 0 || idx >= size()) {
    throw GeometryError("global parameter outside the scene");
  }
  return {idx, t};
}

double Scene::min_separation(int samples_per_curve) const {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Vec2>> pts;
  for (const auto& c : obstacles_) pts.push_back(c.sample(samples_per_curve));
  for (std::size_t p = 0; p < pts.size(); ++p) {
    for (std::size_t q = p + 1; q < pts.size(); ++q) {
      for (const Vec2& a : pts[p]) {
        for (const Vec2& b : pts[q]) best = std::min(best, distance(a, b));
      }
    }
  }
  return best;
}

bool Scene::contains(Vec2 x, int samples_per_curve) const {
  for (const auto& c : obstacles_) {
    if (point_in_polygon(x, c.sample(samples_per_curve))) return true;
  }
  return false;
}

double Scene::diameter() const {
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
  double hi_x = -lo_x, hi_y = -lo_x;
  for (const auto& c : obstacles_) {
    for (const Vec2& v : c.sample(256)) {
      lo_x = std::min(lo_x, v.x);
      hi_x = std::max(hi_x, v.x);
      lo_y = std::min(lo_y, v.y);
      hi_y = std::max(hi_y, v.y);
    }
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

void validate_scene(const Scene& scene, int samples_per_curve) {
  std::vector<std::vector<Vec2>> polys;
  for (const auto& c : scene.obstacles()) {
    for (int i = 0; i < samples_per_curve; ++i) {
      if (!(c.speed(double(i) / samples_per_curve) > 0.0)) {
        throw GeometryError("curve '" + c.name() + "' is not regular");
      }
    }
    polys.push_back(c.sample(samples_per_curve));
  }
  for (std::size_t p = 0; p < polys.size(); ++p) {
    const auto& poly = polys[p];
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        if (segments_cross(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
          throw GeometryError("curve '" + scene.obstacle(int(p)).name() +
                              "' self-intersects");
        }
      }
    }
  }
  for (std::size_t p = 0; p < polys.size(); ++p) {
    for (std::size_t q = p + 1; q < polys.size(); ++q) {
      const auto& a = polys[p];
      const auto& b = polys[q];
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          if (segments_cross(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) {
            throw GeometryError("obstacles overlap");
          }
        }
      }
      if (point_in_polygon(a.front(), b) || point_in_polygon(b.front(), a)) {
        throw GeometryError("obstacle nested inside another");
      }
    }
  }
}

ScenePreset parse_scene_preset(std::string_view name) {
  static constexpr std::array<ScenePreset, 7> all{
      ScenePreset::circle,         ScenePreset::ellipse,
      ScenePreset::almost_convex,  ScenePreset::nonconvex_polygon,
      ScenePreset::near_inclusion, ScenePreset::two_circles,
      ScenePreset::three_ellipses};
  for (ScenePreset p : all) {
    if (to_string(p) == name) return p;
  }
  throw GeometryError("unknown scene preset '" + std::string(name) + "'");
}

std::string_view to_string(ScenePreset preset) {
  switch (preset) {
    case ScenePreset::circle: return "circle";
    case ScenePreset::ellipse: return "ellipse";
    case ScenePreset::almost_convex: return "almost_convex";
    case ScenePreset::nonconvex_polygon: return "nonconvex_polygon";
    case ScenePreset::near_inclusion: return "near_inclusion";
    case ScenePreset::two_circles: return "two_circles";
    case ScenePreset::three_ellipses: return "three_ellipses";
  }
  return "unknown";
}

Scene preset_scene(ScenePreset preset, const SceneParams& params) {
  const Vec2 c = params.center;
  const double R = params.radius;
  if (!(R > 0.0)) throw GeometryError("radius must be positive");
  auto circle = [](Vec2 center, double radius, std::string name) {
    return radial_curve(
        center, [radius](double) { return radius; }, [](double) { return 0.0; },
        std::move(name));
  };
  std::vector<ParamCurve> curves;
  switch (preset) {
    case ScenePreset::circle:
      curves.push_back(circle(c, R, "circle"));
      break;
    case ScenePreset::ellipse:
      curves.push_back(ellipse_curve(c, params.semi_a, params.semi_b,
                                     params.rotation, "ellipse"));
      break;
    case ScenePreset::almost_convex: {
      const double eps = params.epsilon;
      if (!(std::abs(eps) < 1.0)) {
        throw GeometryError("almost_convex epsilon must satisfy |epsilon| < 1");
      }
      auto [pos, der] = radial_maps(
          c, {[R, eps](double th) { return R * (1.0 + eps * std::cos(3 * th)); },
              [R, eps](double th) { return -3.0 * R * eps * std::sin(3 * th); }});
      curves.push_back(arc_length_curve(pos, der, "almost_convex"));
      break;
    }
    case ScenePreset::nonconvex_polygon: {
      auto [pos, der] = radial_maps(c, smoothed_polygon_radius(R));
      curves.push_back(arc_length_curve(pos, der, "nonconvex_polygon"));
      break;
    }
    case ScenePreset::near_inclusion: {
      auto [pos, der] = radial_maps(c, notched_radius(R));
      curves.push_back(arc_length_curve(pos, der, "near_inclusion"));
      break;
    }
    case ScenePreset::two_circles:
      // Radius R/2 each, gap of one diameter, stacked along y.
      curves.push_back(circle(c + Vec2{0.0, R}, 0.5 * R, "upper_circle"));
      curves.push_back(circle(c - Vec2{0.0, R}, 0.5 * R, "lower_circle"));
      break;
    case ScenePreset::three_ellipses:
      // One upstream of a +x wave, two downstream; the third sits behind the
      // first.
      curves.push_back(ellipse_curve(c + Vec2{-1.2, 0.25} * R, 0.35 * R,
                                     0.6 * R, 0.2, "ellipse_1"));
      curves.push_back(ellipse_curve(c + Vec2{0.8, -1.0} * R, 0.45 * R,
                                     0.3 * R, -0.4, "ellipse_2"));
      curves.push_back(ellipse_curve(c + Vec2{1.0, 0.4} * R, 0.4 * R,
                                     0.25 * R, 0.3, "ellipse_3"));
      break;
  }
  Scene scene(std::move(curves));
  validate_scene(scene);
  return scene;
}

IncidentWave IncidentWave::plane(Vec2 direction, Complex amplitude) {
  const double n = norm(direction);
  if (!(n > 0.0)) throw GeometryError("plane wave direction must be nonzero");
  IncidentWave w;
  w.parts_.push_back(PlaneWave{direction * (1.0 / n), amplitude});
  return w;
}

IncidentWave IncidentWave::point_source(Vec2 source, Complex amplitude) {
  IncidentWave w;
  w.parts_.push_back(PointSource{source, amplitude});
  return w;
}

IncidentWave IncidentWave::superposition(std::vector<IncidentWave> waves) {
  IncidentWave w;
  for (auto& part : waves) {
    w.parts_.insert(w.parts_.end(), part.parts_.begin(), part.parts_.end());
  }
  return w;
}

IncidentWave IncidentWave::three_plane(double first_angle) {
  std::vector<IncidentWave> waves;
  for (int m = 0; m < 3; ++m) {
    const double a = first_angle + m * kTwoPi / 3.0;
    waves.push_back(plane({std::cos(a), std::sin(a)}));
  }
  return superposition(std::move(waves));
}

void IncidentWave::validate_against(const Scene& scene) const {
  for (const Part& part : parts_) {
    if (const auto* ps = std::get_if<PointSource>(&part)) {
      if (scene.contains(ps->source)) {
        throw GeometryError("point source lies inside an obstacle");
      }
      for (const auto& c : scene.obstacles()) {
        for (const Vec2& v : c.sample(2048)) {
          if (distance(v, ps->source) <= 1e-9) {
            throw GeometryError("point source lies on an obstacle");
          }
        }
      }
    }
  }
}

Complex eval_incident(const IncidentWave& wave, double k, Vec2 x) {
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  Complex u = 0.0;
  for (const auto& part : wave.parts()) {
    if (const auto* pw = std::get_if<PlaneWave>(&part)) {
      u += pw->amplitude * std::polar(1.0, k * dot(pw->direction, x));
    } else {
      const auto& ps = std::get<PointSource>(part);
      if (ps.source == x) {
        throw std::invalid_argument("incident field evaluated at the point source");
      }
      u += ps.amplitude * greens_function(k, ps.source, x);
    }
  }
  return u;
}

}  // namespace ascbem
