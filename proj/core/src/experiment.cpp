#include "lrfs/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace lrfs {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kBirthTag = 0x62697274ull;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

BirthModel make_birth_model(const ScenarioConfig& cfg, std::int64_t time, double amplitude,
                            const RngContext& rng) {
  BirthModel birth;
  for (std::size_t i = 0; i < cfg.birth_points.size(); ++i) {
    const Label label{static_cast<std::uint32_t>(time), static_cast<std::uint32_t>(i)};
    RngStream stream(derive_key(
        {rng.seed, rng.trial, static_cast<std::uint64_t>(time), kBirthTag, label_key(label)}));
    ParticleCloud cloud;
    cloud.points.reserve(cfg.particles_per_target);
    cloud.weights.assign(cfg.particles_per_target, 1.0 / double(cfg.particles_per_target));
    const Eigen::Vector4d& mean = cfg.birth_points[i];
    for (std::size_t p = 0; p < cfg.particles_per_target; ++p) {
      Vec5 x;
      for (int d = 0; d < 4; ++d)
        x(d) = mean(d) + std::sqrt(cfg.birth_cov_diag(d)) * stream.normal();
      x(4) = std::max(amplitude + cfg.zeta_birth_std * stream.normal(), 0.0);
      cloud.points.push_back(x);
    }
    birth.births.emplace(label, BirthTrack{cfg.birth_prob, make_density(std::move(cloud))});
  }
  return birth;
}

std::vector<Eigen::Vector2d> positions_of(const std::vector<TrackEstimate>& estimates) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(estimates.size());
  for (const auto& e : estimates) out.emplace_back(e.kinematic_mean(0), e.kinematic_mean(2));
  return out;
}

std::vector<Eigen::Vector2d> positions_of(const std::vector<LabeledState>& states) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(states.size());
  for (const auto& s : states) out.emplace_back(s.kinematic(0), s.kinematic(2));
  return out;
}

}  // namespace

TrialResult run_trial(const ScenarioConfig& cfg, const RadarGrid& grid,
                      const TruthResult& truth, std::uint64_t trial_index,
                      const std::string& frame_dump_dir) {
  TrialResult result;
  const RngContext rng{cfg.seed, trial_index};
  const double amplitude = amplitude_from_snr(cfg.snr_db, cfg.sigma_w_sq);
  const EchoModel echo{amplitude};
  const NcvModel dynamics(cfg.dynamics);
  const FilterParams params = cfg.filter_params();

  SurvivalModel survival;
  survival.survival_prob = [ps = cfg.survival_prob](const Vec5&, const Label&) { return ps; };
  survival.transition.sample = [&dynamics](const Vec5& x, const Label&, RngStream& s) {
    return dynamics.sample(x, s);
  };

  FilterState state = initial_filter_state();
  try {
    for (int k = 0; k < cfg.steps; ++k) {
      const auto& truth_k = truth.per_step[static_cast<std::size_t>(k)];
      const RadarFrame frame =
          synthesize_frame(truth_k, grid, echo, cfg.psf_eps, cfg.seed, trial_index, k);
      if (!frame_dump_dir.empty()) {
        char name[64];
        std::snprintf(name, sizeof(name), "step_%04d", k);
        write_frame_binary(frame, frame_dump_dir + "/" + name + ".bin");
        write_frame_csv(frame, frame_dump_dir + "/" + name + ".csv");
      }

      state = predict(state, survival, make_birth_model(cfg, k, amplitude, rng), params, rng);

      if (cfg.mode == "separable") {
        SeparableLikelihood lik;
        lik.log_gamma = [&frame, &grid, &echo, eps = cfg.psf_eps](const Vec5& x, const Label&) {
          return separable_frame_log_likelihood(frame, x, grid, echo, eps);
        };
        state = separable_update_path(state, lik, params, rng);
      } else {
        JointLogLikelihood loglik = [&frame, &grid, &echo, eps = cfg.psf_eps](
                                        std::span<const Vec5> xs, std::span<const Label> ls) {
          thread_local std::vector<LabeledState> scratch;
          scratch.resize(xs.size());
          for (std::size_t i = 0; i < xs.size(); ++i)
            scratch[i] = LabeledState{xs[i], ls[i]};
          return frame_log_likelihood(frame, scratch, grid, echo, eps);
        };
        state = generic_update(state, loglik, params, rng);
      }

      StepRecord record;
      record.estimates = extract_tracks(state);
      record.true_count = truth_k.size();
      record.ospa_distance =
          ospa(positions_of(record.estimates), positions_of(truth_k), cfg.ospa);
      double peak = 0.0, total = 0.0;
      for (double p : frame.power) {
        peak = std::max(peak, p);
        total += p;
      }
      record.frame_peak_power = peak;
      record.frame_mean_power = frame.power.empty() ? 0.0 : total / double(frame.power.size());
      result.steps.push_back(std::move(record));
    }
  } catch (const DegenerateDensityError& e) {
    result.ok = false;
    result.error = e.what();
  }
  return result;
}

MonteCarloResult run_monte_carlo(const ScenarioConfig& base_cfg, const RunOptions& options) {
  ScenarioConfig cfg = base_cfg;
  if (options.trials) cfg.trials = *options.trials;
  if (options.seed) cfg.seed = *options.seed;
  if (options.mode) {
    if (*options.mode != "separable" && *options.mode != "generic")
      throw ConfigError("mode: must be \"separable\" or \"generic\"");
    cfg.mode = *options.mode;
  }
  if (cfg.trials < 1) throw ConfigError("trials: must be >= 1");

  const fs::path out_dir(options.out_dir.empty() ? "." : options.out_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  {
    std::ofstream probe(out_dir / ".write_probe");
    if (!probe) throw ConfigError("output directory not writable: " + out_dir.string());
  }
  fs::remove(out_dir / ".write_probe", ec);

  const RadarGrid grid = build_grid(cfg);
  const TruthResult truth = generate_truth(cfg, grid);

  MonteCarloResult result;
  result.warnings = truth.warnings;
  result.trials = static_cast<std::size_t>(cfg.trials);

  std::vector<TrialResult> trials(result.trials);
  std::size_t n_threads = options.threads ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<std::size_t>(n_threads, result.trials);

  std::vector<std::string> dump_dirs(result.trials);
  if (options.dump_frames) {
    for (std::size_t t = 0; t < result.trials; ++t) {
      char name[64];
      std::snprintf(name, sizeof(name), "frames/trial_%04zu", t);
      dump_dirs[t] = (out_dir / name).string();
      fs::create_directories(dump_dirs[t]);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= result.trials) break;
      trials[t] = run_trial(cfg, grid, truth, t, dump_dirs[t]);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::size_t steps = static_cast<std::size_t>(cfg.steps);
  result.true_card.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) result.true_card[k] = truth.per_step[k].size();

  std::vector<std::vector<double>> ospa_series, card_series;
  for (std::size_t t = 0; t < result.trials; ++t) {
    if (!trials[t].ok) {
      ++result.failed_trials;
      result.warnings.push_back("trial " + std::to_string(t) + " failed: " + trials[t].error);
      continue;
    }
    std::vector<double> o(steps), c(steps);
    for (std::size_t k = 0; k < steps; ++k) {
      o[k] = trials[t].steps[k].ospa_distance;
      c[k] = static_cast<double>(trials[t].steps[k].estimates.size());
    }
    ospa_series.push_back(std::move(o));
    card_series.push_back(std::move(c));
  }
  if (ospa_series.empty()) throw DegenerateDensityError("all trials failed");
  result.ospa_stats = mc_aggregate(ospa_series);
  result.card_stats = mc_aggregate(card_series);

  // CSV outputs: the interface of record
  {
    std::ofstream f(out_dir / "ospa.csv");
    f << "time,mean_ospa,se_ospa\n";
    for (std::size_t k = 0; k < steps; ++k)
      f << k << ',' << fmt(result.ospa_stats.mean[k]) << ',' << fmt(result.ospa_stats.se[k])
        << '\n';
  }
  {
    std::ofstream f(out_dir / "cardinality.csv");
    f << "time,true_n,mean_est_n,se_est_n\n";
    for (std::size_t k = 0; k < steps; ++k)
      f << k << ',' << result.true_card[k] << ',' << fmt(result.card_stats.mean[k]) << ','
        << fmt(result.card_stats.se[k]) << '\n';
  }
  {
    std::ofstream f(out_dir / "tracks.csv");
    f << "trial,time,label_birth,label_index,px,py,vx,vy,amp\n";
    for (std::size_t t = 0; t < result.trials; ++t) {
      if (!trials[t].ok) continue;
      for (std::size_t k = 0; k < steps; ++k)
        for (const auto& e : trials[t].steps[k].estimates) {
          const Vec5& x = e.kinematic_mean;
          f << t << ',' << k << ',' << e.label.birth_time << ',' << e.label.index << ','
            << fmt(x(0)) << ',' << fmt(x(2)) << ',' << fmt(x(1)) << ',' << fmt(x(3)) << ','
            << fmt(x(4)) << '\n';
        }
    }
  }
  plot_from_csv(out_dir.string());
  return result;
}

}  // namespace lrfs
