#pragma once

#include "lrfs/approx.hpp"
#include "lrfs/discrete.hpp"
#include "lrfs/filter.hpp"

namespace lrfs {

// Random small instances and densities used by the self-test, the unit
// tests, and the acceptance suite.

std::shared_ptr<const std::vector<Vec5>> random_grid(std::size_t n_points, RngStream& rng);

// Fully random (correlated) normalized density over all labeled sets.
DiscreteInstance random_discrete_instance(std::size_t n_labels, std::size_t n_points,
                                          RngStream& rng);

// Random delta-GLMB with grid densities over random label subsets (always
// includes the empty set).
DGlmbDensity random_dglmb(const LabelSet& labels,
                          const std::shared_ptr<const std::vector<Vec5>>& grid,
                          RngStream& rng);

// Index of x in the grid (exact coefficient match).
std::size_t find_point_index(const std::vector<Vec5>& grid, const Vec5& x);

// Table-backed separable factor: log gamma uniform in [log lo, log hi].
SeparableLikelihood random_separable_likelihood(
    const LabelSet& labels, const std::shared_ptr<const std::vector<Vec5>>& grid,
    RngStream& rng, double lo = 0.2, double hi = 5.0);

// Table-backed non-separable joint likelihood over canonical labeled sets;
// returns the value map so the same table can drive the enumeration oracle.
struct JointLikelihoodTable {
  std::shared_ptr<const std::vector<Vec5>> grid;
  std::map<DiscreteSet, double> values;  // linear-domain g(X); g({}) = 1

  double linear(const DiscreteSet& set) const;
  JointLogLikelihood log_callable() const;
};
JointLikelihoodTable random_joint_likelihood(const LabelSet& labels,
                                             const std::shared_ptr<const std::vector<Vec5>>& grid,
                                             RngStream& rng, double lo = 0.2, double hi = 5.0);

// Cardinality distribution of independent existence probabilities
// (convolution; brute-force oracle for LMB expansions).
std::vector<double> poisson_binomial(std::span<const double> existence);

}  // namespace lrfs
