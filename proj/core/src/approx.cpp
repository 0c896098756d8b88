#include "lrfs/approx.hpp"

#include <cmath>

#include "lrfs/numerics.hpp"

namespace lrfs {
namespace {

// log evidence <p, gamma> for one label of one component
double log_evidence(const SingleObjectDensity& d, const SeparableLikelihood& lik,
                    const Label& l) {
  std::vector<double> terms;
  for_each_mass(d, [&](const Vec5& x, double w) {
    if (w <= 0.0) return;
    terms.push_back(std::log(w) + lik.log_gamma(x, l));
  });
  if (terms.empty()) return kNegInf;
  return log_sum_exp(terms);
}

SingleObjectDensity reweighted(const SingleObjectDensity& d, const SeparableLikelihood& lik,
                               const Label& l, double log_eta) {
  SingleObjectDensity out = d;
  std::visit(
      [&](auto& rep) {
        auto& weights = [&]() -> std::vector<double>& {
          if constexpr (std::is_same_v<std::decay_t<decltype(rep)>, ParticleCloud>)
            return rep.weights;
          else
            return rep.masses;
        }();
        const auto& points = [&]() -> const std::vector<Vec5>& {
          if constexpr (std::is_same_v<std::decay_t<decltype(rep)>, ParticleCloud>)
            return rep.points;
          else
            return *rep.grid;
        }();
        for (std::size_t i = 0; i < weights.size(); ++i) {
          if (weights[i] <= 0.0) {
            weights[i] = 0.0;
            continue;
          }
          weights[i] =
              std::exp(std::log(weights[i]) + lik.log_gamma(points[i], l) - log_eta);
        }
      },
      out);
  return out;
}

std::size_t tensor_size(std::size_t n_points, std::size_t n_axes) {
  std::size_t s = 1;
  for (std::size_t i = 0; i < n_axes; ++i) s *= n_points;
  return s;
}

}  // namespace

DGlmbDensity separable_update(const DGlmbDensity& prior, const SeparableLikelihood& lik) {
  std::vector<DGlmbComponent> comps;
  std::vector<double> log_weights;
  comps.reserve(prior.components.size());
  for (const auto& c : prior.components) {
    DGlmbComponent out;
    out.labels = c.labels;
    double log_w = c.weight > 0.0 ? std::log(c.weight) : kNegInf;
    for (const Label& l : c.labels) {
      const double log_eta = log_evidence(c.density(l), lik, l);
      log_w += log_eta;
      if (log_eta == kNegInf) {
        out.densities.emplace(l, c.densities.at(l));  // weight is zero anyway
        continue;
      }
      out.densities.emplace(l, make_density(reweighted(c.density(l), lik, l, log_eta)));
    }
    log_weights.push_back(log_w);
    comps.push_back(std::move(out));
  }
  const double log_total = log_sum_exp(log_weights);
  if (log_total == kNegInf)
    throw DegenerateDensityError("separable_update: all posterior weights are zero");
  for (std::size_t i = 0; i < comps.size(); ++i)
    comps[i].weight = std::exp(log_weights[i] - log_total);
  return normalize(make_dglmb(std::move(comps)));
}

void LabeledJointDensity::validate(double tol) const {
  double total = 0.0;
  for (const auto& [L, w] : existence) {
    if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("negative existence weight");
    total += w;
    if (w > 0.0 && !L.empty() && !joints.contains(L))
      throw std::invalid_argument("missing joint for label set " + to_string(L));
  }
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("existence weights sum to " + std::to_string(total));
  for (const auto& [L, joint] : joints) {
    double mass = 0.0;
    if (const auto* g = std::get_if<JointGrid>(&joint)) {
      if (g->masses.size() != tensor_size(g->grid->size(), L.size()))
        throw std::invalid_argument("joint grid size mismatch");
      for (double m : g->masses) mass += m;
    } else {
      const auto& p = std::get<JointParticles>(joint);
      for (double m : p.weights) mass += m;
    }
    if (std::abs(mass - 1.0) > tol)
      throw std::invalid_argument("joint for " + to_string(L) + " integrates to " +
                                  std::to_string(mass));
  }
}

LabeledJointDensity decompose(const DiscreteInstance& pi) {
  double total = 0.0;
  for (const auto& [set, mass] : pi.density) total += mass;
  if (std::abs(total - 1.0) > 1e-6)
    throw std::invalid_argument("decompose: density integrates to " + std::to_string(total));

  LabeledJointDensity out;
  for (const auto& [set, mass] : pi.density) out.existence[labels_of(set)] += mass;

  const std::size_t n_points = pi.grid->size();
  for (const auto& [L, w] : out.existence) {
    if (L.empty() || w <= 0.0) continue;
    JointGrid joint;
    joint.grid = pi.grid;
    joint.masses.assign(tensor_size(n_points, L.size()), 0.0);
    out.joints.emplace(L, std::move(joint));
  }
  for (const auto& [set, mass] : pi.density) {
    if (set.empty()) continue;
    const LabelSet L = labels_of(set);
    const double w = out.existence.at(L);
    if (w <= 0.0) continue;
    // canonical sets are label-sorted, so element j is axis j
    std::size_t linear = 0;
    std::size_t stride = 1;
    for (std::size_t j = 0; j < set.size(); ++j) {
      linear += set[j].point * stride;
      stride *= n_points;
    }
    std::get<JointGrid>(out.joints.at(L)).masses[linear] = mass / w;
  }
  return out;
}

SingleObjectDensity joint_marginal(const JointDensity& joint, std::size_t n_axes,
                                   std::size_t axis) {
  if (axis >= n_axes) throw std::invalid_argument("joint_marginal: bad axis");
  if (const auto* g = std::get_if<JointGrid>(&joint)) {
    const std::size_t n_points = g->grid->size();
    DiscreteGridDensity out;
    out.grid = g->grid;
    out.masses.assign(n_points, 0.0);
    std::size_t stride = 1;
    for (std::size_t i = 0; i < axis; ++i) stride *= n_points;
    for (std::size_t linear = 0; linear < g->masses.size(); ++linear)
      out.masses[(linear / stride) % n_points] += g->masses[linear];
    return out;
  }
  const auto& p = std::get<JointParticles>(joint);
  ParticleCloud out;
  out.points.reserve(p.samples.size());
  out.weights = p.weights;
  for (const auto& s : p.samples) out.points.push_back(s[axis]);
  return out;
}

DGlmbDensity marginal_product_approx(const LabeledJointDensity& pi) {
  std::vector<DGlmbComponent> comps;
  for (const auto& [L, w] : pi.existence) {
    if (w <= 0.0) continue;
    DGlmbComponent c;
    c.labels = L;
    c.weight = w;
    if (!L.empty()) {
      const JointDensity& joint = pi.joints.at(L);
      for (std::size_t axis = 0; axis < L.size(); ++axis)
        c.densities.emplace(L[axis], make_density(joint_marginal(joint, L.size(), axis)));
    }
    comps.push_back(std::move(c));
  }
  return make_dglmb(std::move(comps));
}

GlmbMixture mixture_marginal_approx(const GeneralGlmb& pi) {
  GlmbMixture out;
  out.terms.reserve(pi.terms.size());
  for (const auto& t : pi.terms) {
    GlmbMixture::Term term;
    term.index = t.index;
    term.component.labels = t.labels;
    term.component.weight = t.weight;
    for (std::size_t axis = 0; axis < t.labels.size(); ++axis)
      term.component.densities.emplace(
          t.labels[axis], make_density(joint_marginal(t.joint, t.labels.size(), axis)));
    out.terms.push_back(std::move(term));
  }
  return out;
}

DGlmbDensity merge_mixture(const GlmbMixture& mix) {
  std::map<LabelSet, std::vector<const DGlmbComponent*>> groups;
  for (const auto& t : mix.terms) groups[t.component.labels].push_back(&t.component);
  std::vector<DGlmbComponent> comps;
  for (const auto& [L, parts] : groups) {
    DGlmbComponent c;
    c.labels = L;
    std::vector<double> ws;
    for (const auto* p : parts) {
      c.weight += p->weight;
      ws.push_back(p->weight);
    }
    for (const Label& l : L) {
      std::vector<DensityPtr> ds;
      for (const auto* p : parts) ds.push_back(p->densities.at(l));
      c.densities.emplace(l, make_density(c.weight > 0.0 ? mix_densities(ws, ds)
                                                         : SingleObjectDensity(*ds.front())));
    }
    comps.push_back(std::move(c));
  }
  return make_dglmb(std::move(comps));
}

CardinalityDistribution cardinality(const GlmbMixture& mix) {
  std::size_t n_max = 0;
  for (const auto& t : mix.terms) n_max = std::max(n_max, t.component.labels.size());
  CardinalityDistribution out;
  out.masses.assign(n_max + 1, 0.0);
  for (const auto& t : mix.terms) out.masses[t.component.labels.size()] += t.component.weight;
  return out;
}

LabeledPhd phd(const GlmbMixture& mix) {
  std::map<Label, std::pair<std::vector<double>, std::vector<DensityPtr>>> parts;
  for (const auto& t : mix.terms)
    for (const Label& l : t.component.labels) {
      auto& [ws, ds] = parts[l];
      ws.push_back(t.component.weight);
      ds.push_back(t.component.densities.at(l));
    }
  LabeledPhd out;
  for (auto& [l, wd] : parts) {
    auto& [ws, ds] = wd;
    LabeledPhd::Entry e;
    for (double w : ws) e.mass += w;
    e.density = e.mass > 0.0 ? mix_densities(ws, ds) : *ds.front();
    out.per_label.emplace(l, std::move(e));
  }
  return out;
}

DiscreteInstance general_to_instance(const GeneralGlmb& g, const LabelSet& label_space) {
  DiscreteInstance inst;
  inst.label_space = label_space;
  for (const auto& t : g.terms) {
    if (t.labels.empty()) continue;
    const auto* jg = std::get_if<JointGrid>(&t.joint);
    if (!jg) throw std::invalid_argument("general_to_instance: needs grid joints");
    if (!inst.grid)
      inst.grid = jg->grid;
    else if (jg->grid != inst.grid && !same_grid(*jg->grid, *inst.grid))
      throw std::invalid_argument("general_to_instance: joints on different grids");
  }
  if (!inst.grid) throw std::invalid_argument("general_to_instance: no grid joints");
  const std::size_t n_points = inst.grid->size();

  for (const auto& set : enumerate_sets(label_space, n_points)) {
    const LabelSet L = labels_of(set);
    double mass = 0.0;
    for (const auto& t : g.terms) {
      if (t.labels != L) continue;
      if (L.empty()) {
        mass += t.weight;
        continue;
      }
      std::size_t linear = 0;
      std::size_t stride = 1;
      for (std::size_t j = 0; j < set.size(); ++j) {
        linear += set[j].point * stride;
        stride *= n_points;
      }
      mass += t.weight * std::get<JointGrid>(t.joint).masses[linear];
    }
    inst.density.emplace(set, mass);
  }
  return inst;
}

}  // namespace lrfs
