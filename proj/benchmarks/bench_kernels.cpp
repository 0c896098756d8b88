#include <benchmark/benchmark.h>

#include "lrfs/metrics.hpp"
#include "lrfs/numerics.hpp"
#include "lrfs/rng.hpp"
#include "lrfs/sensor.hpp"

namespace {

using namespace lrfs;

void bm_log_bessel_i0(benchmark::State& state) {
  RngStream rng(1);
  std::vector<double> args(4096);
  const double scale = static_cast<double>(state.range(0));
  for (double& a : args) a = scale * rng.uniform01();
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_bessel_i0(args[i++ & 4095]));
  }
}
BENCHMARK(bm_log_bessel_i0)->Arg(10)->Arg(100)->Arg(1000);

RadarGrid bench_grid() {
  RadarGrid grid;
  grid.range = {200, 600.0, 5.0};
  grid.azimuth = {40, 0.5, 0.0174532925199432957};
  grid.doppler = {15, 8.0, 1.0};
  grid.noise_power = 1.0;
  return grid;
}

void bm_separable_likelihood(benchmark::State& state) {
  const RadarGrid grid = bench_grid();
  const EchoModel echo{3.1660307};
  Vec5 x;
  x << 800.0, -10.0, 700.0, -10.0, echo.mean_amplitude;
  const std::vector<LabeledState> truth{{x, Label{0, 0}}};
  const RadarFrame frame = synthesize_frame(truth, grid, echo, 1e-2, 7, 0, 0);
  RngStream rng(3);
  for (auto _ : state) {
    Vec5 p = x;
    p(0) += rng.uniform01() * 10.0 - 5.0;
    p(2) += rng.uniform01() * 10.0 - 5.0;
    benchmark::DoNotOptimize(separable_frame_log_likelihood(frame, p, grid, echo, 1e-2));
  }
}
BENCHMARK(bm_separable_likelihood);

void bm_joint_likelihood_pair(benchmark::State& state) {
  const RadarGrid grid = bench_grid();
  const EchoModel echo{3.1660307};
  Vec5 a, b;
  a << 800.0, -10.0, 700.0, -10.0, echo.mean_amplitude;
  b << 812.0, -10.0, 706.0, -10.0, echo.mean_amplitude;
  const std::vector<LabeledState> truth{{a, Label{0, 0}}, {b, Label{0, 1}}};
  const RadarFrame frame = synthesize_frame(truth, grid, echo, 1e-2, 7, 0, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(frame_log_likelihood(frame, truth, grid, echo, 1e-2));
  }
}
BENCHMARK(bm_joint_likelihood_pair);

void bm_frame_synthesis(benchmark::State& state) {
  const RadarGrid grid = bench_grid();
  const EchoModel echo{3.1660307};
  Vec5 x;
  x << 800.0, -10.0, 700.0, -10.0, echo.mean_amplitude;
  const std::vector<LabeledState> truth{{x, Label{0, 0}}};
  std::uint64_t trial = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_frame(truth, grid, echo, 1e-2, 7, trial++, 0));
  }
}
BENCHMARK(bm_frame_synthesis);

void bm_assignment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RngStream rng(5);
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform01() * 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_assignment(cost));
  }
}
BENCHMARK(bm_assignment)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
