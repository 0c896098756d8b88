#pragma once

#include <optional>
#include <string>

#include "lrfs/filter.hpp"
#include "lrfs/metrics.hpp"
#include "lrfs/sensor.hpp"

namespace lrfs {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruthTrack {
  int birth_step = 0;
  int death_step = 0;             // alive on [birth, death)
  Eigen::Vector4d initial;        // [p_x, v_x, p_y, v_y]
};

struct AxisExtent {
  double lo = 0.0, hi = 0.0;
};

// Full experiment description. Field names in the config file mirror the
// usual radar TBD symbols (T_s, q, P_B, P_S, N_p, R, B, D, Q_B, ...).
struct ScenarioConfig {
  std::string mode = "generic";  // "separable" | "generic"
  double snr_db = 7.0;
  double sigma_w_sq = 1.0;
  DynamicsParams dynamics;
  double range_resolution = 5.0;        // R (m)
  double azimuth_resolution_deg = 1.0;  // B (deg in the file, radians inside the grid)
  double doppler_resolution = 1.0;      // D (m/s)
  std::optional<AxisExtent> range_extent;        // m
  std::optional<AxisExtent> azimuth_extent_deg;  // deg
  std::optional<AxisExtent> doppler_extent;      // m/s
  double birth_prob = 0.01;    // P_B
  double survival_prob = 0.99; // P_S
  Eigen::Vector4d birth_cov_diag;  // Q_B diagonal
  std::vector<Eigen::Vector4d> birth_points;
  double zeta_birth_std = 1.0;
  double psf_eps = 1e-2;
  std::size_t particles_per_target = 1000;  // N_p
  std::size_t max_components = 100;
  double min_component_weight = 1e-5;
  int steps = 0;
  std::vector<TruthTrack> truth;
  int trials = 1;
  std::uint64_t seed = 0;
  OspaParams ospa;

  FilterParams filter_params() const {
    return {max_components, min_component_weight, particles_per_target};
  }
};

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);  // same validation

// Measurement grid; extents are taken from the config when present, else
// derived from the truth script and birth points with a 20% margin.
RadarGrid build_grid(const ScenarioConfig& cfg);

struct TruthResult {
  std::vector<std::vector<LabeledState>> per_step;  // sorted by label
  std::vector<std::string> warnings;                // coverage truncations
};

// Noise-free drift trajectories with constant amplitude; tracks leaving grid
// coverage have their lives truncated (with a warning).
TruthResult generate_truth(const ScenarioConfig& cfg, const RadarGrid& grid);

}  // namespace lrfs
