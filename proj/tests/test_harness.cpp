#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lrfs/experiment.hpp"

using namespace lrfs;
namespace fs = std::filesystem;

namespace {

std::string preset(const char* name) {
  return std::string(LRFS_SOURCE_DIR) + "/presets/" + name;
}

// small fast scenario for end-to-end checks
std::string small_config(const std::string& mode, int trials = 1) {
  std::ostringstream ss;
  ss << R"({
  "mode": ")" << mode << R"(",
  "SNR_dB": 12.0,
  "sigma_w_sq": 1.0,
  "T_s": 1.0,
  "q": 3.0,
  "a_zeta": 1.0,
  "P_B": 0.01,
  "P_S": 0.99,
  "N_p": 100,
  "R_m": 20.0,
  "B_deg": 2.0,
  "D_mps": 2.0,
  "Q_B_diag": [400.0, 100.0, 400.0, 100.0],
  "birth_points": [[1250.0, -10.0, 1000.0, -10.0], [1000.0, -10.0, 1250.0, -10.0]],
  "zeta_birth_std": 1.0,
  "psf_eps": 0.01,
  "max_components": 30,
  "min_component_weight": 1e-5,
  "steps": 6,
  "truth": [
    {"birth": 0, "death": 6, "x0": [1250.0, -10.0, 1000.0, -10.0]},
    {"birth": 2, "death": 6, "x0": [1000.0, -10.0, 1250.0, -10.0]}
  ],
  "trials": )" << trials << R"(,
  "seed": 5150
})";
  return ss.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::set<std::uint32_t>> templates_at(const ScenarioConfig& cfg,
                                                  const RadarGrid& grid,
                                                  const std::vector<LabeledState>& states) {
  std::vector<std::set<std::uint32_t>> out;
  for (const auto& s : states) {
    const auto t = target_template(s.kinematic, grid, cfg.psf_eps);
    std::set<std::uint32_t> cells;
    for (const auto& c : t.cells) cells.insert(c.cell);
    out.push_back(std::move(cells));
  }
  return out;
}

}  // namespace

TEST_CASE("bundled presets reproduce the documented parameters") {
  SUBCASE("separable preset") {
    const auto cfg = load_config(preset("separable.cfg"));
    CHECK(cfg.mode == "separable");
    CHECK(cfg.snr_db == 7.0);
    CHECK(cfg.range_resolution == 5.0);
    CHECK(cfg.azimuth_resolution_deg == 1.0);
    CHECK(cfg.doppler_resolution == 1.0);
    CHECK(cfg.dynamics.sampling_time == 2.0);
    CHECK(cfg.dynamics.process_noise_psd == 3.0);
    CHECK(cfg.dynamics.amplitude_walk == 1.0);
    CHECK(cfg.birth_prob == 0.01);
    CHECK(cfg.survival_prob == 0.99);
    CHECK(cfg.particles_per_target == 1000);
    CHECK(cfg.birth_cov_diag(0) == 25.0);
    CHECK(cfg.birth_cov_diag(1) == 4.0);
    REQUIRE(cfg.birth_points.size() == 3);
    CHECK(cfg.birth_points[0](0) == 1250.0);
    CHECK(cfg.birth_points[1](0) == 1000.0);
    CHECK(cfg.birth_points[2](2) == 1250.0);
  }
  SUBCASE("nonseparable preset") {
    const auto cfg = load_config(preset("nonseparable.cfg"));
    CHECK(cfg.mode == "generic");
    CHECK(cfg.range_resolution == 20.0);
    CHECK(cfg.azimuth_resolution_deg == 2.0);
    CHECK(cfg.doppler_resolution == 2.0);
    CHECK(cfg.dynamics.sampling_time == 1.0);
    CHECK(cfg.birth_cov_diag(0) == 400.0);
    CHECK(cfg.birth_cov_diag(1) == 100.0);
  }
  SUBCASE("validation errors name the offending field") {
    auto text = slurp(preset("separable.cfg"));
    const auto pos = text.find("\"P_S\": 0.99");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 11, "\"P_S\": 1.5");
    try {
      (void)parse_config(text);
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("P_S") != std::string::npos);
    }
  }
  SUBCASE("missing fields are reported by name") {
    try {
      (void)parse_config("{\"mode\": \"generic\"}");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("missing") != std::string::npos);
    }
  }
}

TEST_CASE("truth generation") {
  SUBCASE("single scripted target is alive on [birth, death)") {
    auto cfg = parse_config(small_config("generic"));
    cfg.truth = {{0, 5, Eigen::Vector4d(1250.0, -10.0, 1000.0, -10.0)}};
    cfg.steps = 8;
    const auto grid = build_grid(cfg);
    const auto truth = generate_truth(cfg, grid);
    for (int k = 0; k < 5; ++k) CHECK(truth.per_step[k].size() == 1);
    for (int k = 5; k < 8; ++k) CHECK(truth.per_step[k].empty());
    // noise-free drift
    CHECK(truth.per_step[3][0].kinematic(0) == doctest::Approx(1250.0 - 30.0));
    CHECK(truth.per_step[3][0].kinematic(4) ==
          doctest::Approx(amplitude_from_snr(cfg.snr_db, cfg.sigma_w_sq)));
  }
  SUBCASE("death at or before birth contributes nothing") {
    auto cfg = parse_config(small_config("generic"));
    cfg.truth = {{3, 3, Eigen::Vector4d(1250.0, -10.0, 1000.0, -10.0)},
                 {0, 6, Eigen::Vector4d(1000.0, -10.0, 1250.0, -10.0)}};
    const auto grid = build_grid(cfg);
    const auto truth = generate_truth(cfg, grid);
    for (int k = 0; k < cfg.steps; ++k) CHECK(truth.per_step[k].size() == 1);
  }
  SUBCASE("tracks leaving explicit coverage are truncated with a warning") {
    auto cfg = parse_config(small_config("generic"));
    cfg.steps = 10;
    cfg.truth = {{0, 10, Eigen::Vector4d(1250.0, -40.0, 1000.0, -10.0)}};
    cfg.range_extent = AxisExtent{1450.0, 1650.0};  // leaves after a few steps
    cfg.azimuth_extent_deg = AxisExtent{30.0, 60.0};
    cfg.doppler_extent = AxisExtent{10.0, 50.0};
    const auto grid = build_grid(cfg);
    const auto truth = generate_truth(cfg, grid);
    CHECK_FALSE(truth.warnings.empty());
    CHECK(truth.per_step[9].empty());
  }
}

TEST_CASE("separable preset keeps every pairwise template disjoint") {
  const auto cfg = load_config(preset("separable.cfg"));
  const auto grid = build_grid(cfg);
  const auto truth = generate_truth(cfg, grid);
  CHECK(truth.warnings.empty());
  std::size_t max_alive = 0;
  for (int k = 0; k < cfg.steps; ++k) {
    const auto& states = truth.per_step[k];
    max_alive = std::max(max_alive, states.size());
    const auto cells = templates_at(cfg, grid, states);
    for (std::size_t i = 0; i < cells.size(); ++i)
      for (std::size_t j = i + 1; j < cells.size(); ++j)
        for (std::uint32_t c : cells[i]) CHECK(cells[j].count(c) == 0);
  }
  CHECK(max_alive == 5);
}

TEST_CASE("nonseparable preset has a step where two targets share a cell") {
  const auto cfg = load_config(preset("nonseparable.cfg"));
  const auto grid = build_grid(cfg);
  const auto truth = generate_truth(cfg, grid);
  CHECK(truth.warnings.empty());
  bool shared = false;
  std::size_t max_alive = 0;
  for (int k = 0; k < cfg.steps && !shared; ++k) {
    const auto& states = truth.per_step[k];
    max_alive = std::max(max_alive, states.size());
    // same nearest cell counts as sharing a radar cell
    std::set<std::size_t> nearest;
    for (const auto& s : states) {
      const std::size_t cell = grid.linear(
          grid.range.nearest(target_range(s.kinematic)),
          grid.azimuth.nearest(target_bearing(s.kinematic)),
          grid.doppler.nearest(target_doppler(s.kinematic)));
      if (!nearest.insert(cell).second) shared = true;
    }
  }
  for (int k = 0; k < cfg.steps; ++k)
    max_alive = std::max(max_alive, truth.per_step[k].size());
  CHECK(shared);
  CHECK(max_alive == 7);
}

TEST_CASE("trials are deterministic given the seed") {
  const auto cfg = parse_config(small_config("generic"));
  const auto grid = build_grid(cfg);
  const auto truth = generate_truth(cfg, grid);
  const auto a = run_trial(cfg, grid, truth, 0);
  const auto b = run_trial(cfg, grid, truth, 0);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  REQUIRE(a.steps.size() == b.steps.size());
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    REQUIRE(a.steps[k].estimates.size() == b.steps[k].estimates.size());
    CHECK(a.steps[k].ospa_distance == b.steps[k].ospa_distance);  // bit-identical
    for (std::size_t i = 0; i < a.steps[k].estimates.size(); ++i) {
      CHECK(a.steps[k].estimates[i].label == b.steps[k].estimates[i].label);
      CHECK((a.steps[k].estimates[i].kinematic_mean ==
             b.steps[k].estimates[i].kinematic_mean));
    }
  }
  // different trials see different randomness
  const auto c = run_trial(cfg, grid, truth, 1);
  REQUIRE(c.ok);
  bool any_diff = false;
  for (std::size_t k = 0; k < a.steps.size() && !any_diff; ++k)
    any_diff = a.steps[k].ospa_distance != c.steps[k].ospa_distance;
  CHECK(any_diff);
}

TEST_CASE("monte carlo outputs are byte-identical across runs and thread counts") {
  const auto cfg = parse_config(small_config("generic", 3));
  const fs::path dir1 = fs::temp_directory_path() / "lrfs_mc_a";
  const fs::path dir2 = fs::temp_directory_path() / "lrfs_mc_b";
  fs::remove_all(dir1);
  fs::remove_all(dir2);

  RunOptions opt1;
  opt1.out_dir = dir1.string();
  opt1.threads = 1;
  RunOptions opt2;
  opt2.out_dir = dir2.string();
  opt2.threads = 3;
  const auto r1 = run_monte_carlo(cfg, opt1);
  const auto r2 = run_monte_carlo(cfg, opt2);
  CHECK(r1.failed_trials == 0);
  CHECK(r2.failed_trials == 0);
  for (const char* name : {"ospa.csv", "cardinality.csv", "tracks.csv"})
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));

  // schema spot checks
  std::ifstream f(dir1 / "tracks.csv");
  std::string header;
  std::getline(f, header);
  CHECK(header == "trial,time,label_birth,label_index,px,py,vx,vy,amp");
  std::size_t rows = 0;
  for (std::string line; std::getline(f, line);)
    if (!line.empty()) ++rows;
  CHECK(rows > 0);

  CHECK(fs::exists(dir1 / "cardinality.svg"));
  CHECK(fs::exists(dir1 / "ospa.svg"));

  // plot regeneration reproduces the same SVG bytes
  const std::string before = slurp(dir1 / "ospa.svg");
  plot_from_csv(dir1.string());
  CHECK(slurp(dir1 / "ospa.svg") == before);

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("single trial aggregates to itself") {
  const auto cfg = parse_config(small_config("generic", 1));
  const fs::path dir = fs::temp_directory_path() / "lrfs_mc_single";
  fs::remove_all(dir);
  RunOptions opt;
  opt.out_dir = dir.string();
  opt.threads = 1;
  const auto result = run_monte_carlo(cfg, opt);
  const auto grid = build_grid(cfg);
  const auto truth = generate_truth(cfg, grid);
  const auto trial = run_trial(cfg, grid, truth, 0);
  REQUIRE(trial.ok);
  for (std::size_t k = 0; k < trial.steps.size(); ++k) {
    CHECK(result.ospa_stats.mean[k] == trial.steps[k].ospa_distance);
    CHECK(result.ospa_stats.se[k] == 0.0);
  }
  fs::remove_all(dir);
}
