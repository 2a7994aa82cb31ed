#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ascbem::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw ConfigError("invalid value '" + std::string(value) + "' for key '" +
                    std::string(key) + "'");
}

double to_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view value) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

Setter number(double RunConfig::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) {
    c.*field = to_double(k, v);
  };
}

Setter scene_number(double SceneParams::*field) {
  return [field](RunConfig& c, std::string_view k, std::string_view v) {
    c.scene_params.*field = to_double(k, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"scene",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         try {
           c.scene = parse_scene_preset(v);
         } catch (const std::exception&) {
           bad_value(k, v);
         }
       }},
      {"center_x", [](RunConfig& c, std::string_view k,
                      std::string_view v) { c.scene_params.center.x = to_double(k, v); }},
      {"center_y", [](RunConfig& c, std::string_view k,
                      std::string_view v) { c.scene_params.center.y = to_double(k, v); }},
      {"radius", scene_number(&SceneParams::radius)},
      {"semi_a", scene_number(&SceneParams::semi_a)},
      {"semi_b", scene_number(&SceneParams::semi_b)},
      {"epsilon", scene_number(&SceneParams::epsilon)},
      {"rotation", scene_number(&SceneParams::rotation)},
      {"wave",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v == "plane") c.wave = WaveKind::plane;
         else if (v == "point") c.wave = WaveKind::point;
         else if (v == "three_plane") c.wave = WaveKind::three_plane;
         else bad_value(k, v);
       }},
      {"direction_x", [](RunConfig& c, std::string_view k,
                         std::string_view v) { c.direction.x = to_double(k, v); }},
      {"direction_y", [](RunConfig& c, std::string_view k,
                         std::string_view v) { c.direction.y = to_double(k, v); }},
      {"source_x", [](RunConfig& c, std::string_view k,
                      std::string_view v) { c.source.x = to_double(k, v); }},
      {"source_y", [](RunConfig& c, std::string_view k,
                      std::string_view v) { c.source.y = to_double(k, v); }},
      {"angle", number(&RunConfig::angle)},
      {"amplitude", number(&RunConfig::amplitude)},
      {"k", number(&RunConfig::k)},
      {"k_min", number(&RunConfig::k_min)},
      {"k_max", number(&RunConfig::k_max)},
      {"k_step", number(&RunConfig::k_step)},
      {"ppw", number(&RunConfig::ppw)},
      {"degree", [](RunConfig& c, std::string_view k,
                    std::string_view v) { c.degree = to_int<int>(k, v); }},
      {"xi", number(&RunConfig::xi)},
      {"T", number(&RunConfig::T)},
      {"T_vis", number(&RunConfig::T_vis)},
      {"method",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v == "dense") c.method = Method::dense;
         else if (v == "correlate") c.method = Method::correlate;
         else if (v == "visibility") c.method = Method::visibility;
         else if (v == "sweep") c.method = Method::sweep;
         else if (v == "block_truncate") c.method = Method::block_truncate;
         else bad_value(k, v);
       }},
      {"solver",
       [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v == "direct") c.solver = SolveMethod::direct;
         else if (v == "gmres") c.solver = SolveMethod::gmres;
         else bad_value(k, v);
       }},
      {"gmres_tol", number(&RunConfig::gmres_tol)},
      {"seed", [](RunConfig& c, std::string_view k,
                  std::string_view v) { c.seed = to_int<std::uint64_t>(k, v); }},
      {"output", [](RunConfig& c, std::string_view k, std::string_view v) {
         if (v.empty()) bad_value(k, v);
         c.output = std::string(v);
       }},
      {"cond", [](RunConfig& c, std::string_view k,
                  std::string_view v) { c.cond = to_bool(k, v); }},
      {"dense_reference", [](RunConfig& c, std::string_view k,
                             std::string_view v) { c.dense_reference = to_bool(k, v); }},
      {"dense_limit", [](RunConfig& c, std::string_view k,
                         std::string_view v) { c.dense_limit = to_int<int>(k, v); }},
      {"field_nx", [](RunConfig& c, std::string_view k,
                      std::string_view v) { c.field_nx = to_int<int>(k, v); }},
      {"field_ny", [](RunConfig& c, std::string_view k,
                      std::string_view v) { c.field_ny = to_int<int>(k, v); }},
  };
  return table;
}

void require(bool ok, std::string_view key, const std::string& why) {
  if (!ok) throw ConfigError("key '" + std::string(key) + "': " + why);
}

}  // namespace

void set_key(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  it->second(cfg, key, value);
}

std::vector<std::string_view> known_keys() {
  std::vector<std::string_view> keys;
  for (const auto& [key, setter] : setters()) keys.push_back(key);
  return keys;
}

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("duplicate key '" + std::string(key) + "'");
    }
    set_key(cfg, key, value);
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_run_config(in);
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + item + "' is not key=value");
    const std::string_view text = item;
    set_key(cfg, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::dense: return "dense";
    case Method::correlate: return "correlate";
    case Method::visibility: return "visibility";
    case Method::sweep: return "sweep";
    case Method::block_truncate: return "block_truncate";
  }
  return "?";
}

Scene RunConfig::build_scene() const {
  try {
    return preset_scene(scene, scene_params);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("key 'scene': ") + e.what());
  }
}

IncidentWave RunConfig::build_wave() const {
  switch (wave) {
    case WaveKind::plane: return IncidentWave::plane(direction, amplitude);
    case WaveKind::point: return IncidentWave::point_source(source, amplitude);
    case WaveKind::three_plane: {
      IncidentWave w = IncidentWave::three_plane(angle);
      if (amplitude == 1.0) return w;
      std::vector<IncidentWave> scaled;
      for (const auto& part : w.parts()) {
        scaled.push_back(IncidentWave::plane(std::get<PlaneWave>(part).direction, amplitude));
      }
      return IncidentWave::superposition(std::move(scaled));
    }
  }
  return IncidentWave::plane(direction, amplitude);
}

CorrelationConfig RunConfig::correlation() const {
  CorrelationConfig c;
  c.T = T;
  c.xi = xi;
  return c;
}

VisibilityConfig RunConfig::visibility() const {
  VisibilityConfig v;
  v.T_vis = T_vis;
  return v;
}

void RunConfig::validate() const {
  require(std::isfinite(k) && k > 0.0, "k", "must be positive");
  require(std::isfinite(ppw) && ppw > 0.0, "ppw", "must be positive");
  require(degree == 0 || degree == 1 || degree == 3, "degree", "must be 0, 1 or 3");
  require(xi > 0.0 && xi < 1.0, "xi", "must lie in (0, 1)");
  require(T > 0.0 && T < 0.25, "T", "must lie in (0, 0.25)");
  require(T_vis > 0.0 && T_vis < 0.25, "T_vis", "must lie in (0, 0.25)");
  require(gmres_tol > 0.0 && gmres_tol < 1.0, "gmres_tol", "must lie in (0, 1)");
  require(k_min > 0.0 && k_max >= k_min, "k_max", "needs 0 < k_min <= k_max");
  require(k_step >= 0.0, "k_step", "must be >= 0");
  require(dense_limit > 0, "dense_limit", "must be positive");
  require(field_nx >= 0 && field_ny >= 0, "field_nx", "must be >= 0");
  require((field_nx == 0) == (field_ny == 0), "field_ny", "set both field_nx and field_ny");
  require(norm(direction) > 0.0, "direction_x", "direction must be nonzero");
  const Scene s = build_scene();
  try {
    build_wave().validate_against(s);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("key 'source_x': ") + e.what());
  }
}

}  // namespace ascbem::cli
