#include "lrfs/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lrfs {
namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

double positive(const json& j, const std::string& path) {
  const double v = require_number(j, path);
  if (v <= 0.0) throw ConfigError(path + ": must be > 0");
  return v;
}

double probability(const json& j, const std::string& path) {
  const double v = require_number(j, path);
  if (v < 0.0 || v > 1.0) throw ConfigError(path + ": must be in [0, 1]");
  return v;
}

const json& require(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(key + ": missing field");
  return *it;
}

Eigen::Vector4d vector4(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4) throw ConfigError(path + ": expected 4 numbers");
  Eigen::Vector4d out;
  for (int i = 0; i < 4; ++i) out(i) = require_number(j[i], path);
  return out;
}

AxisExtent extent(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(path + ": expected [lo, hi]");
  AxisExtent e{require_number(j[0], path), require_number(j[1], path)};
  if (e.lo >= e.hi) throw ConfigError(path + ": lo must be < hi");
  return e;
}

struct AxisBounds {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

AxisSpec make_axis(double lo, double hi, double res, double extra_margin,
                   const char* name) {
  const double span = hi - lo;
  const double margin = std::max({0.2 * span, 4.0 * res, extra_margin});
  const double first = res * std::floor((lo - margin) / res);
  const double last = res * std::ceil((hi + margin) / res);
  const std::size_t count = static_cast<std::size_t>(std::lround((last - first) / res)) + 1;
  if (count > 4000)
    throw ConfigError(std::string("grid: ") + name + " axis would need " +
                      std::to_string(count) + " cells; give explicit extents");
  return AxisSpec{count, first, res};
}

AxisSpec axis_from_extent(const AxisExtent& e, double res) {
  const double first = res * std::floor(e.lo / res);
  const double last = res * std::ceil(e.hi / res);
  const std::size_t count = static_cast<std::size_t>(std::lround((last - first) / res)) + 1;
  return AxisSpec{count, first, res};
}

std::vector<LabeledState> raw_truth_at(const ScenarioConfig& cfg, int step, double amplitude) {
  std::vector<LabeledState> out;
  std::map<int, std::uint32_t> index_at_birth;
  for (const auto& track : cfg.truth) {
    const std::uint32_t idx = index_at_birth[track.birth_step]++;
    if (step < track.birth_step || step >= track.death_step) continue;
    const double dt = cfg.dynamics.sampling_time * static_cast<double>(step - track.birth_step);
    LabeledState s;
    s.label = {static_cast<std::uint32_t>(track.birth_step), idx};
    s.kinematic << track.initial(0) + track.initial(1) * dt, track.initial(1),
        track.initial(2) + track.initial(3) * dt, track.initial(3), amplitude;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(),
            [](const LabeledState& a, const LabeledState& b) { return a.label < b.label; });
  return out;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ScenarioConfig cfg;
  cfg.mode = require(j, "mode").get<std::string>();
  if (cfg.mode != "separable" && cfg.mode != "generic")
    throw ConfigError("mode: must be \"separable\" or \"generic\"");
  cfg.snr_db = require_number(require(j, "SNR_dB"), "SNR_dB");
  cfg.sigma_w_sq = positive(j.value("sigma_w_sq", json(1.0)), "sigma_w_sq");
  cfg.dynamics.sampling_time = positive(require(j, "T_s"), "T_s");
  cfg.dynamics.process_noise_psd = positive(require(j, "q"), "q");
  cfg.dynamics.amplitude_walk = positive(require(j, "a_zeta"), "a_zeta");
  cfg.birth_prob = probability(require(j, "P_B"), "P_B");
  cfg.survival_prob = probability(require(j, "P_S"), "P_S");
  cfg.particles_per_target =
      static_cast<std::size_t>(positive(require(j, "N_p"), "N_p"));
  cfg.range_resolution = positive(require(j, "R_m"), "R_m");
  cfg.azimuth_resolution_deg = positive(require(j, "B_deg"), "B_deg");
  cfg.doppler_resolution = positive(require(j, "D_mps"), "D_mps");
  cfg.birth_cov_diag = vector4(require(j, "Q_B_diag"), "Q_B_diag");
  for (int i = 0; i < 4; ++i)
    if (cfg.birth_cov_diag(i) <= 0.0) throw ConfigError("Q_B_diag: entries must be > 0");

  const json& bp = require(j, "birth_points");
  if (!bp.is_array() || bp.empty()) throw ConfigError("birth_points: expected a non-empty array");
  for (std::size_t i = 0; i < bp.size(); ++i)
    cfg.birth_points.push_back(vector4(bp[i], "birth_points[" + std::to_string(i) + "]"));

  cfg.zeta_birth_std = positive(j.value("zeta_birth_std", json(1.0)), "zeta_birth_std");
  cfg.psf_eps = positive(j.value("psf_eps", json(1e-2)), "psf_eps");
  cfg.max_components =
      static_cast<std::size_t>(positive(j.value("max_components", json(100)), "max_components"));
  cfg.min_component_weight =
      require_number(j.value("min_component_weight", json(1e-5)), "min_component_weight");
  if (cfg.min_component_weight < 0.0) throw ConfigError("min_component_weight: must be >= 0");

  cfg.steps = static_cast<int>(positive(require(j, "steps"), "steps"));
  const json& tr = require(j, "truth");
  if (!tr.is_array()) throw ConfigError("truth: expected an array");
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const std::string path = "truth[" + std::to_string(i) + "]";
    TruthTrack t;
    t.birth_step = static_cast<int>(require_number(require(tr[i], "birth"), path + ".birth"));
    t.death_step = static_cast<int>(require_number(require(tr[i], "death"), path + ".death"));
    if (t.birth_step < 0) throw ConfigError(path + ".birth: must be >= 0");
    t.initial = vector4(require(tr[i], "x0"), path + ".x0");
    cfg.truth.push_back(t);
  }

  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (g.contains("range_m")) cfg.range_extent = extent(g["range_m"], "grid.range_m");
    if (g.contains("azimuth_deg"))
      cfg.azimuth_extent_deg = extent(g["azimuth_deg"], "grid.azimuth_deg");
    if (g.contains("doppler_mps"))
      cfg.doppler_extent = extent(g["doppler_mps"], "grid.doppler_mps");
  }
  if (j.contains("ospa")) {
    cfg.ospa.cutoff = positive(j["ospa"].value("cutoff_m", json(50.0)), "ospa.cutoff_m");
    cfg.ospa.order = require_number(j["ospa"].value("order", json(1.0)), "ospa.order");
    if (cfg.ospa.order < 1.0) throw ConfigError("ospa.order: must be >= 1");
  }
  cfg.trials = static_cast<int>(positive(j.value("trials", json(1)), "trials"));
  cfg.seed = j.value("seed", json(0)).get<std::uint64_t>();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

RadarGrid build_grid(const ScenarioConfig& cfg) {
  RadarGrid grid;
  grid.noise_power = cfg.sigma_w_sq;
  const double res_b = cfg.azimuth_resolution_deg * std::numbers::pi / 180.0;

  AxisBounds r_b, b_b, d_b;
  const double amplitude = amplitude_from_snr(cfg.snr_db, cfg.sigma_w_sq);
  for (int k = 0; k < cfg.steps; ++k) {
    for (const auto& s : raw_truth_at(cfg, k, amplitude)) {
      r_b.add(target_range(s.kinematic));
      b_b.add(target_bearing(s.kinematic));
      d_b.add(target_doppler(s.kinematic));
    }
  }
  const double pos_sigma = std::sqrt(std::max(cfg.birth_cov_diag(0), cfg.birth_cov_diag(2)));
  const double vel_sigma = std::sqrt(std::max(cfg.birth_cov_diag(1), cfg.birth_cov_diag(3)));
  double min_range = std::numeric_limits<double>::infinity();
  for (const auto& p : cfg.birth_points) {
    Vec5 x;
    x << p(0), p(1), p(2), p(3), amplitude;
    const double r = target_range(x);
    min_range = std::min(min_range, r);
    r_b.add(r);
    b_b.add(target_bearing(x));
    d_b.add(target_doppler(x));
  }
  if (!std::isfinite(r_b.lo)) throw ConfigError("grid: no truth or birth points to cover");

  grid.range = cfg.range_extent
                   ? axis_from_extent(*cfg.range_extent, cfg.range_resolution)
                   : make_axis(r_b.lo, r_b.hi, cfg.range_resolution, 3.0 * pos_sigma, "range");
  grid.azimuth =
      cfg.azimuth_extent_deg
          ? axis_from_extent({cfg.azimuth_extent_deg->lo * std::numbers::pi / 180.0,
                              cfg.azimuth_extent_deg->hi * std::numbers::pi / 180.0},
                             res_b)
          : make_axis(b_b.lo, b_b.hi, res_b, 3.0 * pos_sigma / std::max(min_range, 1.0),
                      "azimuth");
  grid.doppler = cfg.doppler_extent
                     ? axis_from_extent(*cfg.doppler_extent, cfg.doppler_resolution)
                     : make_axis(d_b.lo, d_b.hi, cfg.doppler_resolution, 3.0 * vel_sigma,
                                 "doppler");
  return grid;
}

TruthResult generate_truth(const ScenarioConfig& cfg, const RadarGrid& grid) {
  TruthResult out;
  out.per_step.resize(static_cast<std::size_t>(cfg.steps));
  const double amplitude = amplitude_from_snr(cfg.snr_db, cfg.sigma_w_sq);
  std::set<Label> truncated;
  for (int k = 0; k < cfg.steps; ++k) {
    for (const auto& s : raw_truth_at(cfg, k, amplitude)) {
      if (truncated.contains(s.label)) continue;
      const double r = target_range(s.kinematic);
      if (!grid.range.covers(r) || !grid.azimuth.covers(target_bearing(s.kinematic)) ||
          !grid.doppler.covers(target_doppler(s.kinematic))) {
        truncated.insert(s.label);
        out.warnings.push_back("truth track " + to_string(s.label) +
                               " leaves grid coverage at step " + std::to_string(k) +
                               "; life truncated");
        continue;
      }
      out.per_step[static_cast<std::size_t>(k)].push_back(s);
    }
  }
  return out;
}

}  // namespace lrfs
