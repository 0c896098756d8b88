#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>

#include "lrfs/labels.hpp"
#include "lrfs/rng.hpp"

namespace lrfs {

// Nearly-constant-velocity dynamics plus a Gaussian random walk on the
// amplitude modulus.
struct DynamicsParams {
  double sampling_time = 1.0;     // T_s (s)
  double process_noise_psd = 1.0; // q (m^2/s^3)
  double amplitude_walk = 1.0;    // a_zeta (linear/s)
};

class NcvModel {
 public:
  explicit NcvModel(const DynamicsParams& params);

  const Eigen::Matrix<double, 5, 5>& transition_matrix() const { return f_; }
  const Eigen::Matrix<double, 5, 5>& process_noise() const { return q_; }

  // x' = F x + v, v ~ N(0, Q); amplitude clamped to >= 0
  Vec5 sample(const Vec5& x, RngStream& rng) const;
  // Gaussian kernel density (before clamping); requires Q positive definite
  double log_pdf(const Vec5& to, const Vec5& from) const;

 private:
  Eigen::Matrix<double, 5, 5> f_;
  Eigen::Matrix<double, 5, 5> q_;
  Eigen::Matrix<double, 5, 5> chol_;     // lower factor, zero when Q singular
  Eigen::Matrix<double, 5, 5> q_inv_;
  double log_norm_ = 0.0;
  bool positive_definite_ = false;
};

Vec5 propagate(const Vec5& x, const DynamicsParams& params, RngStream& rng);

struct AxisSpec {
  std::size_t count = 0;
  double first = 0.0;  // centroid of cell 0
  double step = 1.0;   // centroid spacing == resolution

  double centroid(std::size_t i) const { return first + static_cast<double>(i) * step; }
  double last() const { return centroid(count - 1); }
  bool covers(double v) const { return v >= first - 0.5 * step && v <= last() + 0.5 * step; }
  std::size_t nearest(double v) const;
};

// Measurement grid over (range, azimuth, doppler). Azimuth is radians.
// The resolutions R, B, D appear directly (not squared) in the point spread
// exponent denominators.
struct RadarGrid {
  AxisSpec range;    // m
  AxisSpec azimuth;  // rad
  AxisSpec doppler;  // m/s
  double noise_power = 1.0;  // sigma_w^2 (linear)

  std::size_t cell_count() const { return range.count * azimuth.count * doppler.count; }
  std::size_t linear(std::size_t ir, std::size_t ia, std::size_t id) const {
    return (ir * azimuth.count + ia) * doppler.count + id;
  }
};

// Received power per cell, C-order with range-major layout.
struct RadarFrame {
  std::array<std::size_t, 3> dims{};  // range, azimuth, doppler counts
  std::vector<double> power;

  double at(std::size_t ir, std::size_t ia, std::size_t id) const {
    return power[(ir * dims[1] + ia) * dims[2] + id];
  }
};

// Swerling-0 echo: constant modulus, uniform phase per target per frame.
struct EchoModel {
  double mean_amplitude = 1.0;  // A-bar (linear)
};

double target_range(const Vec5& x);
double target_bearing(const Vec5& x);
double target_doppler(const Vec5& x);

// Point spread value in the given cell; in (0, 1], 1 only at exact centroid
// coincidence. Errors when the target sits at the origin.
double psf(const Vec5& x, double cell_range, double cell_bearing, double cell_doppler,
           const RadarGrid& grid);

struct TemplateCell {
  std::uint32_t cell = 0;  // linear index
  double gain = 0.0;       // psf value
};

struct TargetTemplate {
  std::vector<TemplateCell> cells;
  bool in_coverage = true;
};

// Cells with psf >= eps; always contains the nearest cell. Out-of-coverage
// targets get an empty template with the flag cleared.
TargetTemplate target_template(const Vec5& x, const RadarGrid& grid, double eps);

// Low-level variant used in the likelihood hot path: appends (cell, gain)
// pairs; returns false when the target is out of coverage.
bool append_template(const Vec5& x, const RadarGrid& grid, double eps,
                     std::vector<TemplateCell>& out);

// Complex superposition of per-target echoes over their templates plus
// circularly symmetric noise (variance 2 sigma_w^2 per cell); powers are
// squared moduli. Deterministic given (seed, trial, time).
RadarFrame synthesize_frame(std::span<const LabeledState> targets, const RadarGrid& grid,
                            const EchoModel& echo, double psf_eps, std::uint64_t seed,
                            std::uint64_t trial, std::int64_t time,
                            std::vector<Label>* out_of_coverage = nullptr);

// A-bar = sqrt(2 sigma_w^2 10^(snr/10))
double amplitude_from_snr(double snr_db, double sigma_w_sq);

// log of the per-cell likelihood ratio between target-present (non-central
// chi-squared, 2 dof) and noise-only returns. Reduces to
// -z_hat/2 + log I0(sqrt(z z_hat)) at sigma_w^2 = 1.
double cell_log_likelihood_ratio(double z, double z_hat, double sigma_w_sq);

// Joint log likelihood ratio over the union of the targets' templates, with
// the noiseless return formed as the coherent in-phase sum of echoes.
// Empty input gives 0.
double frame_log_likelihood(const RadarFrame& frame, std::span<const LabeledState> targets,
                            const RadarGrid& grid, const EchoModel& echo, double psf_eps);

// Single-target ratio over the target's own template (the separable
// per-object factor). Out-of-coverage targets give 0.
double separable_frame_log_likelihood(const RadarFrame& frame, const Vec5& x,
                                      const RadarGrid& grid, const EchoModel& echo,
                                      double psf_eps);

void write_frame_binary(const RadarFrame& frame, const std::string& path);
void write_frame_csv(const RadarFrame& frame, const std::string& path);

}  // namespace lrfs
