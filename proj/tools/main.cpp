#include <iostream>

#include "CLI11.hpp"
#include "lrfs/experiment.hpp"
#include "lrfs/selftest.hpp"

namespace {

int cmd_run(const std::string& config_path, const lrfs::RunOptions& options) {
  lrfs::ScenarioConfig cfg;
  try {
    cfg = lrfs::load_config(config_path);
  } catch (const lrfs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  try {
    const auto result = lrfs::run_monte_carlo(cfg, options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "trials: " << result.trials << " (" << result.failed_trials << " failed)\n";
    double ospa_mean = 0.0;
    for (double v : result.ospa_stats.mean) ospa_mean += v;
    if (!result.ospa_stats.mean.empty())
      ospa_mean /= static_cast<double>(result.ospa_stats.mean.size());
    std::cout << "time-averaged mean OSPA: " << ospa_mean << " m\n";
    std::cout << "outputs written to " << (options.out_dir.empty() ? "." : options.out_dir)
              << " (ospa.csv, cardinality.csv, tracks.csv, *.svg)\n";
    if (result.failed_trials * 10 > result.trials) return 2;
    return 0;
  } catch (const lrfs::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Labeled-RFS multi-target track-before-detect filter"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment from a config file");
  std::string config_path;
  lrfs::RunOptions options;
  options.out_dir = "out";
  int trials = -1;
  std::int64_t seed = -1;
  std::string mode;
  run->add_option("--config", config_path, "Scenario config file")->required();
  run->add_option("--trials", trials, "Override the number of Monte Carlo trials");
  run->add_option("--seed", seed, "Override the base seed");
  run->add_option("--out", options.out_dir, "Output directory (default: out)");
  run->add_option("--mode", mode, "Override the update mode: separable|generic");
  run->add_option("--threads", options.threads, "Worker threads (default: hardware)");
  run->add_flag("--dump-frames", options.dump_frames,
                "Write per-step radar frames (binary + CSV) under <out>/frames");

  auto* selftest = app.add_subcommand("selftest", "Run the oracle-backed property suite");

  auto* plot = app.add_subcommand("plot", "Regenerate SVG plots from CSV outputs");
  std::string plot_dir;
  plot->add_option("--in", plot_dir, "Directory containing ospa.csv and cardinality.csv")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (trials >= 0) options.trials = trials;
    if (seed >= 0) options.seed = static_cast<std::uint64_t>(seed);
    if (!mode.empty()) options.mode = mode;
    return cmd_run(config_path, options);
  }
  if (selftest->parsed()) {
    return lrfs::run_selftest(std::cout) == 0 ? 0 : 1;
  }
  if (plot->parsed()) {
    try {
      lrfs::plot_from_csv(plot_dir);
    } catch (const std::exception& e) {
      std::cerr << "plot failed: " << e.what() << "\n";
      return 1;
    }
    return 0;
  }
  return 0;
}
