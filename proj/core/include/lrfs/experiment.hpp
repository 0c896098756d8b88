#pragma once

#include "lrfs/scenario.hpp"

namespace lrfs {

struct StepRecord {
  std::vector<TrackEstimate> estimates;
  std::size_t true_count = 0;
  double ospa_distance = 0.0;
  double frame_peak_power = 0.0;
  double frame_mean_power = 0.0;
};

struct TrialResult {
  bool ok = true;
  std::string error;
  std::vector<StepRecord> steps;
};

struct RunOptions {
  std::string out_dir;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool dump_frames = false;
};

// One deterministic trial: synthesize each frame, predict, update per the
// configured mode, extract tracks.
TrialResult run_trial(const ScenarioConfig& cfg, const RadarGrid& grid,
                      const TruthResult& truth, std::uint64_t trial_index,
                      const std::string& frame_dump_dir = {});

struct MonteCarloResult {
  std::vector<std::size_t> true_card;
  SeriesStats ospa_stats;
  SeriesStats card_stats;
  std::size_t trials = 0;
  std::size_t failed_trials = 0;
  std::vector<std::string> warnings;
};

// Runs trials (in parallel when asked), aggregates, and writes ospa.csv,
// cardinality.csv, tracks.csv plus SVG plots into the output directory.
// Output bytes depend only on (config, seed), not on the thread count.
MonteCarloResult run_monte_carlo(const ScenarioConfig& cfg, const RunOptions& options);

// Regenerates the SVG plots from previously written CSV files.
void plot_from_csv(const std::string& dir);

// Minimal polyline chart writer used for the result plots.
struct ChartSeries {
  std::string name;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool step_style = false;
};
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<ChartSeries>& series);

}  // namespace lrfs
