#pragma once

#include <functional>
#include <map>

#include "lrfs/glmb.hpp"

namespace lrfs {

// One element of a labeled set on a finite grid: (label, grid point index).
struct DiscretePoint {
  Label label;
  std::uint32_t point = 0;

  friend auto operator<=>(const DiscretePoint&, const DiscretePoint&) = default;
};

// Canonical labeled set: sorted by label, labels pairwise distinct.
using DiscreteSet = std::vector<DiscretePoint>;

LabelSet labels_of(const DiscreteSet& s);

// A full labeled multi-object density on a small discrete space, enumerable
// set by set. This is the exact engine used to verify the density algebra:
// everything here is plain summation, no sampling and no truncation.
struct DiscreteInstance {
  static constexpr std::size_t kMaxLabels = 3;
  static constexpr std::size_t kMaxPoints = 6;

  LabelSet label_space;
  std::shared_ptr<const std::vector<Vec5>> grid;
  std::map<DiscreteSet, double> density;  // mass per canonical set, incl. {}

  void validate(double tol = 1e-9) const;
};

// Every canonical labeled set over the label space and grid (incl. {}).
std::vector<DiscreteSet> enumerate_sets(const LabelSet& labels, std::size_t n_points);

// Expectation of f under the instance: the set integral of f * density,
// with the 1/i! handled by enumerating unordered sets once.
double set_integral(const DiscreteInstance& inst,
                    const std::function<double(const DiscreteSet&)>& f);

// Posterior masses = likelihood * prior / normalizer.
DiscreteInstance exact_bayes(const DiscreteInstance& prior,
                             const std::function<double(const DiscreteSet&)>& likelihood);

// Kullback-Leibler divergence sum p log(p/q); 0 log 0 = 0, and +inf when q
// has zero mass where p does not.
double kld(const DiscreteInstance& p, const DiscreteInstance& q);

// Exact statistics by enumeration.
CardinalityDistribution exact_cardinality(const DiscreteInstance& inst);
// mass at (label, grid point), i.e. the labeled first moment evaluated on the grid
std::map<DiscretePoint, double> exact_phd(const DiscreteInstance& inst);

// Evaluates a delta-GLMB (whose densities live on one shared grid) as a full
// discrete instance.
DiscreteInstance dglmb_to_instance(const DGlmbDensity& d, const LabelSet& label_space);

}  // namespace lrfs
