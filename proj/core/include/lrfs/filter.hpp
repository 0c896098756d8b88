#pragma once

#include "lrfs/approx.hpp"
#include "lrfs/glmb.hpp"
#include "lrfs/rng.hpp"

namespace lrfs {

struct DegenerateUpdateError : DegenerateDensityError {
  using DegenerateDensityError::DegenerateDensityError;
};

struct FilterParams {
  std::size_t max_components = 100;
  double min_weight = 1e-5;
  // resample target for particle clouds after merge/update; 0 keeps the
  // incoming cloud size
  std::size_t particles_per_label = 1000;
};

struct FilterState {
  DGlmbDensity density;  // normalized
  std::int64_t time = -1;
  LabelSet labels_used;
};

// Empty-set density at time -1; the first predict step brings births with
// birth_time 0.
FilterState initial_filter_state();

struct BirthTrack {
  double existence = 0.0;  // r_B in [0, 1]
  DensityPtr density;      // p_B over the kinematic space
};

// LMB birth: independent candidate tracks, one per birth label.
struct BirthModel {
  std::map<Label, BirthTrack> births;
};

struct TransitionModel {
  std::function<Vec5(const Vec5&, const Label&, RngStream&)> sample;
  // optional; not used by the sampled filter path
  std::function<double(const Vec5&, const Vec5&, const Label&)> log_pdf;
};

struct SurvivalModel {
  std::function<double(const Vec5&, const Label&)> survival_prob;
  // applied to particle clouds; grid densities are reweighted in place
  // (identity kinematics), which is the exhaustive-verification path
  TransitionModel transition;
};

// Identifies the deterministic random streams of one trial.
struct RngContext {
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

// delta-GLMB prediction with LMB birth. Enumerates survivor and birth
// subsets per prior component; contributions that predict the same label set
// are merged exactly (weights summed, densities mixed), then the result is
// truncated and renormalized.
FilterState predict(const FilterState& state, const SurvivalModel& survival,
                    const BirthModel& birth, const FilterParams& params,
                    const RngContext& rng);

// log g(z | X) for a labeled set given as parallel spans (labels in
// canonical order).
using JointLogLikelihood =
    std::function<double(std::span<const Vec5>, std::span<const Label>)>;

// Update under a generic (non-separable) likelihood: per component, joint
// samples are formed by common-index pairing of the per-label clouds, the
// evidence is estimated by log-mean-exp of the joint log weights, component
// weights pick up the evidence, and the per-label margins of the reweighted
// joint are resampled back to equal weights. Components whose densities are
// all grids are updated exhaustively over the product grid instead (exact).
FilterState generic_update(const FilterState& state, const JointLogLikelihood& loglik,
                           const FilterParams& params, const RngContext& rng);

// Separable fast path: conjugate update, then resampling and truncation.
FilterState separable_update_path(const FilterState& state, const SeparableLikelihood& lik,
                                  const FilterParams& params, const RngContext& rng);

struct TrackEstimate {
  Label label;
  std::int64_t time = 0;
  Vec5 kinematic_mean = Vec5::Zero();
};

// MAP-cardinality extraction: n* maximizes the cardinality distribution
// (lowest n on ties); among components of size n*, the highest-weight one
// (canonical label-set order on ties) reports its per-label cloud means.
std::vector<TrackEstimate> extract_tracks(const FilterState& state);

double effective_sample_size(const ParticleCloud& cloud);

// Systematic resampling to n equally weighted particles.
ParticleCloud resample_cloud(const ParticleCloud& cloud, std::size_t n, RngStream& rng);

}  // namespace lrfs
