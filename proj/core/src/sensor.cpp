#include "lrfs/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "lrfs/numerics.hpp"

namespace lrfs {
namespace {

constexpr std::uint64_t kNoiseTag = 0x6E6F6973ull;  // frame noise stream
constexpr std::uint64_t kPhaseTag = 0x70686173ull;  // per-target phase stream

double axis_factor(double delta, double resolution) {
  return std::exp(-delta * delta / (2.0 * resolution));
}

// window of centroid indices within `reach` of v, guaranteed to include the
// nearest in-grid cell
struct AxisWindow {
  std::size_t lo = 0, hi = 0;  // inclusive
  std::size_t nearest = 0;
};

AxisWindow axis_window(const AxisSpec& axis, double v, double reach) {
  AxisWindow w;
  w.nearest = axis.nearest(v);
  const double rel_lo = (v - reach - axis.first) / axis.step;
  const double rel_hi = (v + reach - axis.first) / axis.step;
  const double lo = std::ceil(rel_lo);
  const double hi = std::floor(rel_hi);
  w.lo = lo <= 0.0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(lo), axis.count - 1);
  w.hi = hi <= 0.0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(hi), axis.count - 1);
  w.lo = std::min(w.lo, w.nearest);
  w.hi = std::max(w.hi, w.nearest);
  return w;
}

}  // namespace

NcvModel::NcvModel(const DynamicsParams& p) {
  const double t = p.sampling_time;
  Eigen::Matrix2d f1;
  f1 << 1.0, t, 0.0, 1.0;
  Eigen::Matrix2d q1;
  q1 << t * t * t / 3.0, t * t / 2.0, t * t / 2.0, t;

  f_.setZero();
  f_.block<2, 2>(0, 0) = f1;
  f_.block<2, 2>(2, 2) = f1;
  f_(4, 4) = 1.0;

  q_.setZero();
  q_.block<2, 2>(0, 0) = p.process_noise_psd * q1;
  q_.block<2, 2>(2, 2) = p.process_noise_psd * q1;
  q_(4, 4) = p.amplitude_walk * t;

  Eigen::LLT<Eigen::Matrix<double, 5, 5>> llt(q_);
  if (llt.info() == Eigen::Success && q_(0, 0) > 0.0 && q_(4, 4) > 0.0) {
    positive_definite_ = true;
    chol_ = llt.matrixL();
    q_inv_ = llt.solve(Eigen::Matrix<double, 5, 5>::Identity());
    double log_det = 0.0;
    for (int i = 0; i < 5; ++i) log_det += 2.0 * std::log(chol_(i, i));
    log_norm_ = -0.5 * (5.0 * std::log(2.0 * std::numbers::pi) + log_det);
  } else {
    chol_.setZero();
  }
}

Vec5 NcvModel::sample(const Vec5& x, RngStream& rng) const {
  Vec5 out = f_ * x;
  if (positive_definite_) {
    Vec5 n;
    for (int i = 0; i < 5; ++i) n(i) = rng.normal();
    out += chol_ * n;
  }
  out(4) = std::max(out(4), 0.0);
  return out;
}

double NcvModel::log_pdf(const Vec5& to, const Vec5& from) const {
  if (!positive_definite_)
    throw std::invalid_argument("transition density undefined for singular process noise");
  const Vec5 d = to - f_ * from;
  return log_norm_ - 0.5 * d.dot(q_inv_ * d);
}

Vec5 propagate(const Vec5& x, const DynamicsParams& params, RngStream& rng) {
  return NcvModel(params).sample(x, rng);
}

std::size_t AxisSpec::nearest(double v) const {
  const double rel = std::round((v - first) / step);
  if (rel <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(rel), count - 1);
}

double target_range(const Vec5& x) { return std::hypot(x(0), x(2)); }

double target_bearing(const Vec5& x) { return std::atan2(x(2), x(0)); }

double target_doppler(const Vec5& x) {
  const double r = target_range(x);
  return -(x(1) * x(0) + x(3) * x(2)) / r;
}

double psf(const Vec5& x, double cell_range, double cell_bearing, double cell_doppler,
           const RadarGrid& grid) {
  const double r = target_range(x);
  if (r <= 0.0) throw std::invalid_argument("psf: target at the radar origin");
  return axis_factor(cell_range - r, grid.range.step) *
         axis_factor(cell_bearing - target_bearing(x), grid.azimuth.step) *
         axis_factor(cell_doppler - target_doppler(x), grid.doppler.step);
}

bool append_template(const Vec5& x, const RadarGrid& grid, double eps,
                     std::vector<TemplateCell>& out) {
  const double r = target_range(x);
  if (r <= 0.0) throw std::invalid_argument("template: target at the radar origin");
  const double b = target_bearing(x);
  const double d = target_doppler(x);
  if (!grid.range.covers(r) || !grid.azimuth.covers(b) || !grid.doppler.covers(d))
    return false;

  const double log_inv_eps = eps < 1.0 ? std::log(1.0 / eps) : 0.0;
  const auto wr = axis_window(grid.range, r, std::sqrt(2.0 * grid.range.step * log_inv_eps));
  const auto wa =
      axis_window(grid.azimuth, b, std::sqrt(2.0 * grid.azimuth.step * log_inv_eps));
  const auto wd =
      axis_window(grid.doppler, d, std::sqrt(2.0 * grid.doppler.step * log_inv_eps));

  thread_local std::vector<double> fr, fa, fd;
  fr.clear();
  fa.clear();
  fd.clear();
  for (std::size_t i = wr.lo; i <= wr.hi; ++i)
    fr.push_back(axis_factor(grid.range.centroid(i) - r, grid.range.step));
  for (std::size_t i = wa.lo; i <= wa.hi; ++i)
    fa.push_back(axis_factor(grid.azimuth.centroid(i) - b, grid.azimuth.step));
  for (std::size_t i = wd.lo; i <= wd.hi; ++i)
    fd.push_back(axis_factor(grid.doppler.centroid(i) - d, grid.doppler.step));

  for (std::size_t ir = wr.lo; ir <= wr.hi; ++ir) {
    const double gr = fr[ir - wr.lo];
    for (std::size_t ia = wa.lo; ia <= wa.hi; ++ia) {
      const double gra = gr * fa[ia - wa.lo];
      if (gra < eps && !(ir == wr.nearest && ia == wa.nearest)) continue;
      for (std::size_t id = wd.lo; id <= wd.hi; ++id) {
        const double g = gra * fd[id - wd.lo];
        const bool is_nearest = ir == wr.nearest && ia == wa.nearest && id == wd.nearest;
        if (g >= eps || is_nearest)
          out.push_back({static_cast<std::uint32_t>(grid.linear(ir, ia, id)), g});
      }
    }
  }
  return true;
}

TargetTemplate target_template(const Vec5& x, const RadarGrid& grid, double eps) {
  TargetTemplate t;
  t.in_coverage = append_template(x, grid, eps, t.cells);
  return t;
}

RadarFrame synthesize_frame(std::span<const LabeledState> targets, const RadarGrid& grid,
                            const EchoModel& echo, double psf_eps, std::uint64_t seed,
                            std::uint64_t trial, std::int64_t time,
                            std::vector<Label>* out_of_coverage) {
  const std::size_t n = grid.cell_count();
  std::vector<double> re(n), im(n);
  RngStream noise(derive_key({seed, trial, static_cast<std::uint64_t>(time), kNoiseTag}));
  const double sigma = std::sqrt(grid.noise_power);
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = sigma * noise.normal();
    im[i] = sigma * noise.normal();
  }

  std::vector<TemplateCell> cells;
  for (const auto& target : targets) {
    cells.clear();
    if (!append_template(target.kinematic, grid, psf_eps, cells)) {
      if (out_of_coverage) out_of_coverage->push_back(target.label);
      continue;
    }
    RngStream phase_stream(derive_key(
        {seed, trial, static_cast<std::uint64_t>(time), kPhaseTag, label_key(target.label)}));
    const double theta = 2.0 * std::numbers::pi * phase_stream.uniform01();
    const double amp = echo.mean_amplitude;
    const double c = amp * std::cos(theta), s = amp * std::sin(theta);
    for (const auto& cell : cells) {
      re[cell.cell] += c * cell.gain;
      im[cell.cell] += s * cell.gain;
    }
  }

  RadarFrame frame;
  frame.dims = {grid.range.count, grid.azimuth.count, grid.doppler.count};
  frame.power.resize(n);
  for (std::size_t i = 0; i < n; ++i) frame.power[i] = re[i] * re[i] + im[i] * im[i];
  return frame;
}

double amplitude_from_snr(double snr_db, double sigma_w_sq) {
  if (sigma_w_sq <= 0.0) throw std::invalid_argument("amplitude_from_snr: sigma_w_sq <= 0");
  return std::sqrt(2.0 * sigma_w_sq * std::pow(10.0, snr_db / 10.0));
}

double cell_log_likelihood_ratio(double z, double z_hat, double sigma_w_sq) {
  if (z_hat <= 0.0) return 0.0;
  const double zs = z / sigma_w_sq;
  const double zh = z_hat / sigma_w_sq;
  return -0.5 * zh + log_bessel_i0(std::sqrt(zs * zh));
}

double frame_log_likelihood(const RadarFrame& frame, std::span<const LabeledState> targets,
                            const RadarGrid& grid, const EchoModel& echo, double psf_eps) {
  if (targets.empty()) return 0.0;
  if (targets.size() == 1)
    return separable_frame_log_likelihood(frame, targets[0].kinematic, grid, echo, psf_eps);

  thread_local std::vector<TemplateCell> scratch;
  scratch.clear();
  for (const auto& target : targets) append_template(target.kinematic, grid, psf_eps, scratch);
  std::stable_sort(scratch.begin(), scratch.end(),
                   [](const TemplateCell& a, const TemplateCell& b) { return a.cell < b.cell; });

  double out = 0.0;
  const double amp = echo.mean_amplitude;
  std::size_t i = 0;
  while (i < scratch.size()) {
    const std::uint32_t cell = scratch[i].cell;
    double amp_sum = 0.0;
    for (; i < scratch.size() && scratch[i].cell == cell; ++i) amp_sum += amp * scratch[i].gain;
    out += cell_log_likelihood_ratio(frame.power[cell], amp_sum * amp_sum, grid.noise_power);
  }
  return out;
}

double separable_frame_log_likelihood(const RadarFrame& frame, const Vec5& x,
                                      const RadarGrid& grid, const EchoModel& echo,
                                      double psf_eps) {
  thread_local std::vector<TemplateCell> cells;
  cells.clear();
  if (!append_template(x, grid, psf_eps, cells)) return 0.0;
  double out = 0.0;
  for (const auto& cell : cells) {
    const double z_hat = echo.mean_amplitude * cell.gain;
    out += cell_log_likelihood_ratio(frame.power[cell.cell], z_hat * z_hat, grid.noise_power);
  }
  return out;
}

void write_frame_binary(const RadarFrame& frame, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(frame.dims[0]),
                                 static_cast<std::uint32_t>(frame.dims[1]),
                                 static_cast<std::uint32_t>(frame.dims[2])};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  f.write(reinterpret_cast<const char*>(frame.power.data()),
          static_cast<std::streamsize>(frame.power.size() * sizeof(double)));
}

void write_frame_csv(const RadarFrame& frame, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "range_idx,azimuth_idx,doppler_idx,power\n";
  char buf[64];
  for (std::size_t ir = 0; ir < frame.dims[0]; ++ir)
    for (std::size_t ia = 0; ia < frame.dims[1]; ++ia)
      for (std::size_t id = 0; id < frame.dims[2]; ++id) {
        std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%.9g\n", ir, ia, id, frame.at(ir, ia, id));
        f << buf;
      }
}

}  // namespace lrfs
