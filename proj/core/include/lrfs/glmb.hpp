#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lrfs/labels.hpp"

namespace lrfs {

// Raised when a normalizer or posterior collapses to zero.
struct DegenerateDensityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weighted kinematic samples representing one single-object density.
struct ParticleCloud {
  std::vector<Vec5> points;
  std::vector<double> weights;  // non-negative, sum to 1

  std::size_t size() const { return points.size(); }
};

// Probability masses over an explicit, shared grid of kinematic points.
// Used by the exhaustive verification engine and small tests, where exact
// sums are required.
struct DiscreteGridDensity {
  std::shared_ptr<const std::vector<Vec5>> grid;
  std::vector<double> masses;  // aligned with *grid, sum to 1
};

using SingleObjectDensity = std::variant<ParticleCloud, DiscreteGridDensity>;
using DensityPtr = std::shared_ptr<const SingleObjectDensity>;

bool same_grid(const std::vector<Vec5>& a, const std::vector<Vec5>& b);

DensityPtr make_density(ParticleCloud cloud);
DensityPtr make_density(DiscreteGridDensity grid);
DensityPtr make_density(SingleObjectDensity d);

Vec5 density_mean(const SingleObjectDensity& d);
double density_weight_sum(const SingleObjectDensity& d);
void validate_density(const SingleObjectDensity& d, double tol = 1e-9);

// Applies f(point, mass) over the support.
template <class F>
void for_each_mass(const SingleObjectDensity& d, F&& f) {
  if (const auto* c = std::get_if<ParticleCloud>(&d)) {
    for (std::size_t i = 0; i < c->points.size(); ++i) f(c->points[i], c->weights[i]);
  } else {
    const auto& g = std::get<DiscreteGridDensity>(d);
    for (std::size_t i = 0; i < g.masses.size(); ++i) f((*g.grid)[i], g.masses[i]);
  }
}

// One delta-GLMB term: a label set, its weight, and one density per label.
struct DGlmbComponent {
  LabelSet labels;
  double weight = 0.0;
  std::map<Label, DensityPtr> densities;  // keys exactly `labels`

  const SingleObjectDensity& density(const Label& l) const { return *densities.at(l); }
};

// delta-GLMB density: one component per label set, weights summing to 1.
// Components are kept sorted in canonical label-set order.
struct DGlmbDensity {
  std::vector<DGlmbComponent> components;
};

// Sorts components canonically and checks label-set uniqueness.
DGlmbDensity make_dglmb(std::vector<DGlmbComponent> components);
void validate(const DGlmbDensity& d, double tol = 1e-9);

struct CardinalityDistribution {
  std::vector<double> masses;  // indexed by n = 0..n_max

  double mean() const;
};

// Per-label first moment: existence mass and the normalized mixture density.
struct LabeledPhd {
  struct Entry {
    double mass = 0.0;
    SingleObjectDensity density;
  };
  std::map<Label, Entry> per_label;

  double total_mass() const;
};

struct LmbTrack {
  double existence = 0.0;  // in [0, 1]
  DensityPtr density;
};

// Labeled multi-Bernoulli density: independent tracks with existence
// probabilities.
struct LmbDensity {
  std::map<Label, LmbTrack> tracks;
};

CardinalityDistribution cardinality(const DGlmbDensity& d);
LabeledPhd phd(const DGlmbDensity& d);

// Weight of label set L under the LMB: prod_{l in L} r_l * prod_{l not in L} (1 - r_l),
// zero if L contains a label without a track. Tracks with r = 1 contribute
// weight zero to any set omitting them.
double lmb_weight(const LmbDensity& lmb, const LabelSet& L);

// Expands the LMB over all subsets of its track set. Refuses above
// `max_tracks` (2^N components).
DGlmbDensity lmb_to_dglmb(const LmbDensity& lmb, std::size_t max_tracks = 20);

DGlmbDensity normalize(DGlmbDensity d);

// Keeps the `max_components` highest-weight components with weight >=
// min_weight (ties broken by canonical label-set order), then renormalizes.
// Always keeps at least the top component.
DGlmbDensity truncate(DGlmbDensity d, std::size_t max_components, double min_weight);

// Mixture of single-object densities with the given convex weights.
// Grid densities over a common grid combine pointwise; anything else is
// combined as a weighted particle cloud.
SingleObjectDensity mix_densities(std::span<const double> weights,
                                  std::span<const DensityPtr> parts);

}  // namespace lrfs
