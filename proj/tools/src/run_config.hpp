#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ascbem/compression.hpp"
#include "ascbem/geometry.hpp"
#include "ascbem/solve.hpp"
#include "ascbem/visibility.hpp"

namespace ascbem::cli {

/// Raised for malformed, unknown or out-of-range keys. what() names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { dense, correlate, visibility, sweep, block_truncate };
enum class WaveKind { plane, point, three_plane };

struct RunConfig {
  ScenePreset scene = ScenePreset::circle;
  SceneParams scene_params;

  WaveKind wave = WaveKind::plane;
  Vec2 direction{1.0, 0.0};
  Vec2 source{1.0, 1.0};
  double angle = 0.0;
  double amplitude = 1.0;

  double k = 64.0;
  double k_min = 64.0;
  double k_max = 256.0;
  /// 0 selects doubling; otherwise linear steps.
  double k_step = 0.0;

  double ppw = 10.0;
  int degree = 1;
  double xi = 0.003;
  double T = 0.02;
  double T_vis = 0.15;
  Method method = Method::dense;
  SolveMethod solver = SolveMethod::direct;
  double gmres_tol = 1e-5;
  std::uint64_t seed = 1;
  std::filesystem::path output = "out";

  bool cond = false;
  bool dense_reference = false;
  int dense_limit = 3000;
  int field_nx = 0;
  int field_ny = 0;

  Scene build_scene() const;
  IncidentWave build_wave() const;
  CorrelationConfig correlation() const;
  VisibilityConfig visibility() const;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Applies one `key = value` assignment.
void set_key(RunConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` lines; `#` starts a comment. Duplicate keys are errors.
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies `key=value` overrides on top of a parsed config.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

std::vector<std::string_view> known_keys();

std::string_view to_string(Method method);

}  // namespace ascbem::cli
