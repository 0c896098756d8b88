#pragma once

#include "lrfs/discrete.hpp"
#include "lrfs/glmb.hpp"

namespace lrfs {

// Multi-object likelihood that factors into per-object terms. gamma is kept
// in log form; evaluation at radar SNRs spans hundreds of orders of
// magnitude in the linear domain.
struct SeparableLikelihood {
  std::function<double(const Vec5&, const Label&)> log_gamma;

  double gamma(const Vec5& x, const Label& l) const { return std::exp(log_gamma(x, l)); }
};

// Conjugate update of a delta-GLMB under a separable likelihood: component
// weights pick up the product of per-label evidences, per-label densities
// are reweighted by gamma and renormalized. No resampling happens here.
DGlmbDensity separable_update(const DGlmbDensity& prior, const SeparableLikelihood& lik);

// Joint density over the product kinematic space of a label set. Axes follow
// the canonical label order; for grids, the linear index runs with the first
// label's point index fastest.
struct JointGrid {
  std::shared_ptr<const std::vector<Vec5>> grid;
  std::vector<double> masses;  // size grid^(n labels)
};
struct JointParticles {
  std::vector<std::vector<Vec5>> samples;  // samples[j][axis]
  std::vector<double> weights;
};
using JointDensity = std::variant<JointGrid, JointParticles>;

// A labeled multi-object density factored into joint existence probabilities
// over label sets and label-conditioned joint kinematic densities.
struct LabeledJointDensity {
  std::map<LabelSet, double> existence;     // w(L), sums to 1
  std::map<LabelSet, JointDensity> joints;  // defined where w(L) > 0; none for {}

  void validate(double tol = 1e-9) const;
};

// Factors an enumerable density into (existence weights, label-conditioned
// joints). Errors if the instance is not normalized within 1e-6.
LabeledJointDensity decompose(const DiscreteInstance& pi);

// Replaces each label-conditioned joint by the product of its marginals.
// The result is the delta-GLMB with matched weights; it preserves the
// cardinality distribution and the labeled first moment of the input, and
// minimizes the KL divergence within that class.
DGlmbDensity marginal_product_approx(const LabeledJointDensity& pi);

// General (index-carrying) GLMB mixture whose per-index terms hold joint
// kinematic densities per label set.
struct GeneralGlmb {
  struct Term {
    int index = 0;  // mixture index
    LabelSet labels;
    double weight = 0.0;
    JointDensity joint;  // ignored for the empty label set
  };
  std::vector<Term> terms;  // weights sum to 1 over all (index, labels)
};

// Mixture of delta-GLMB-style components keyed by (index, label set); label
// sets may repeat across indices.
struct GlmbMixture {
  struct Term {
    int index = 0;
    DGlmbComponent component;
  };
  std::vector<Term> terms;
};

// Per-term marginal-product approximation. Terms with identical label sets
// are kept distinct; call merge_mixture for a strict delta-GLMB (this sums
// weights and weight-averages the per-label densities, which changes the
// density but not the weights).
GlmbMixture mixture_marginal_approx(const GeneralGlmb& pi);
DGlmbDensity merge_mixture(const GlmbMixture& mix);

CardinalityDistribution cardinality(const GlmbMixture& mix);
LabeledPhd phd(const GlmbMixture& mix);

// Evaluates a GeneralGlmb as a full discrete instance (grid joints only).
DiscreteInstance general_to_instance(const GeneralGlmb& g, const LabelSet& label_space);

// Marginal of one axis of a joint density.
SingleObjectDensity joint_marginal(const JointDensity& joint, std::size_t n_axes,
                                   std::size_t axis);

}  // namespace lrfs
