#include "lrfs/filter.hpp"

#include <algorithm>
#include <cmath>

#include "lrfs/numerics.hpp"

namespace lrfs {
namespace {

constexpr std::uint64_t kTransitionTag = 0x74726E73ull;
constexpr std::uint64_t kResampleTag = 0x72736D70ull;
constexpr std::uint64_t kMergeTag = 0x6D657267ull;

RngStream stream_for(const RngContext& rng, std::int64_t time, std::uint64_t tag,
                     std::uint64_t component_key, const Label& label) {
  return RngStream(derive_key({rng.seed, rng.trial, static_cast<std::uint64_t>(time), tag,
                               component_key, label_key(label)}));
}

// survivor-conditioned predicted density for one (component, label)
struct Survivor {
  double eta = 0.0;  // <p_S, p>
  DensityPtr density;
};

Survivor make_survivor(const SingleObjectDensity& d, const Label& label,
                       const SurvivalModel& model, RngStream transition_stream) {
  Survivor out;
  if (const auto* cloud = std::get_if<ParticleCloud>(&d)) {
    ParticleCloud moved;
    moved.points.reserve(cloud->size());
    moved.weights.reserve(cloud->size());
    for (std::size_t j = 0; j < cloud->size(); ++j) {
      const double ps = model.survival_prob(cloud->points[j], label);
      out.eta += cloud->weights[j] * ps;
      moved.points.push_back(model.transition.sample(cloud->points[j], label, transition_stream));
      moved.weights.push_back(cloud->weights[j] * ps);
    }
    if (out.eta > 0.0) {
      for (double& w : moved.weights) w /= out.eta;
      out.density = make_density(std::move(moved));
    }
    return out;
  }
  const auto& grid = std::get<DiscreteGridDensity>(d);
  DiscreteGridDensity kept;
  kept.grid = grid.grid;
  kept.masses.resize(grid.masses.size());
  for (std::size_t j = 0; j < grid.masses.size(); ++j) {
    const double ps = model.survival_prob((*grid.grid)[j], label);
    kept.masses[j] = grid.masses[j] * ps;
    out.eta += kept.masses[j];
  }
  if (out.eta > 0.0) {
    for (double& m : kept.masses) m /= out.eta;
    out.density = make_density(std::move(kept));
  }
  return out;
}

bool all_particles(std::span<const DensityPtr> parts) {
  for (const auto& p : parts)
    if (!std::holds_alternative<ParticleCloud>(*p)) return false;
  return true;
}

ParticleCloud mix_and_resample(std::span<const double> mix_weights,
                               std::span<const DensityPtr> parts, std::size_t n,
                               RngStream& rng) {
  double total = 0.0;
  for (double w : mix_weights) total += w;
  std::vector<double> flat;
  std::vector<std::pair<const ParticleCloud*, std::uint32_t>> src;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& cloud = std::get<ParticleCloud>(*parts[i]);
    const double scale = mix_weights[i] / total;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      flat.push_back(scale * cloud.weights[j]);
      src.emplace_back(&cloud, static_cast<std::uint32_t>(j));
    }
  }
  const auto picks = systematic_resample(flat, n, rng.uniform01());
  ParticleCloud out;
  out.points.reserve(n);
  out.weights.assign(n, 1.0 / static_cast<double>(n));
  for (auto i : picks) out.points.push_back(src[i].first->points[src[i].second]);
  return out;
}

// shared truncation policy on (label set, weight) candidates: weight
// descending, canonical order on ties, at least one kept
std::vector<std::size_t> select_components(std::span<const LabelSet> labels,
                                           std::span<const double> weights,
                                           const FilterParams& params) {
  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return labels[a] < labels[b];
  });
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < order.size() && kept.size() < params.max_components; ++i) {
    if (total > 0.0 && weights[order[i]] / total < params.min_weight) break;
    if (weights[order[i]] <= 0.0) break;
    kept.push_back(order[i]);
  }
  if (kept.empty() && !order.empty()) kept.push_back(order[0]);
  return kept;
}

}  // namespace

FilterState initial_filter_state() {
  DGlmbComponent empty;
  empty.weight = 1.0;
  FilterState s;
  s.density = make_dglmb({std::move(empty)});
  s.time = -1;
  return s;
}

FilterState predict(const FilterState& state, const SurvivalModel& survival,
                    const BirthModel& birth, const FilterParams& params,
                    const RngContext& rng) {
  const std::int64_t new_time = state.time + 1;

  std::vector<Label> birth_labels;
  for (const auto& [l, b] : birth.births) {
    if (b.existence < 0.0 || b.existence > 1.0)
      throw std::invalid_argument("birth existence outside [0,1]");
    birth_labels.push_back(l);
  }
  if (birth_labels.size() > 20) throw std::invalid_argument("predict: too many birth labels");

  // survivor data per (component, label)
  std::vector<std::map<Label, Survivor>> survivors(state.density.components.size());
  for (std::size_t ci = 0; ci < state.density.components.size(); ++ci) {
    const auto& comp = state.density.components[ci];
    if (comp.labels.size() > 20) throw std::invalid_argument("predict: component too large");
    const std::uint64_t comp_key = label_set_key(comp.labels);
    for (const Label& l : comp.labels)
      survivors[ci].emplace(
          l, make_survivor(comp.density(l), l, survival,
                           stream_for(rng, new_time, kTransitionTag, comp_key, l)));
  }

  // enumerate (survivor subset, birth subset) candidates and merge by
  // predicted label set
  std::map<LabelSet, std::vector<std::pair<std::size_t, double>>> merged;
  for (std::size_t ci = 0; ci < state.density.components.size(); ++ci) {
    const auto& comp = state.density.components[ci];
    const auto& labels = comp.labels.labels();
    const std::size_t ns = labels.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ns); ++mask) {
      double w_s = comp.weight;
      std::vector<Label> kept;
      for (std::size_t i = 0; i < ns && w_s > 0.0; ++i) {
        const Survivor& sv = survivors[ci].at(labels[i]);
        if (mask & (std::uint64_t{1} << i)) {
          w_s *= sv.eta;
          kept.push_back(labels[i]);
        } else {
          w_s *= 1.0 - sv.eta;
        }
      }
      if (w_s <= 0.0) continue;
      const LabelSet survivor_set{std::move(kept)};
      for (std::uint64_t bmask = 0; bmask < (std::uint64_t{1} << birth_labels.size());
           ++bmask) {
        double w = w_s;
        std::vector<Label> born;
        for (std::size_t i = 0; i < birth_labels.size() && w > 0.0; ++i) {
          const double r = birth.births.at(birth_labels[i]).existence;
          if (bmask & (std::uint64_t{1} << i)) {
            w *= r;
            born.push_back(birth_labels[i]);
          } else {
            w *= 1.0 - r;
          }
        }
        if (w <= 0.0) continue;
        merged[survivor_set.set_union(LabelSet{std::move(born)})].emplace_back(ci, w);
      }
    }
  }
  if (merged.empty()) throw DegenerateDensityError("predict: no feasible label sets");

  std::vector<LabelSet> cand_labels;
  std::vector<double> cand_weights;
  std::vector<const std::vector<std::pair<std::size_t, double>>*> cand_parts;
  for (const auto& [L, parts] : merged) {
    double w = 0.0;
    for (const auto& [ci, pw] : parts) w += pw;
    cand_labels.push_back(L);
    cand_weights.push_back(w);
    cand_parts.push_back(&parts);
  }

  const auto kept = select_components(cand_labels, cand_weights, params);

  std::vector<DGlmbComponent> comps;
  comps.reserve(kept.size());
  for (std::size_t k : kept) {
    DGlmbComponent c;
    c.labels = cand_labels[k];
    c.weight = cand_weights[k];
    const auto& parts = *cand_parts[k];
    const std::uint64_t set_key = label_set_key(c.labels);
    for (const Label& l : c.labels) {
      if (l.birth_time == static_cast<std::uint64_t>(new_time) &&
          birth.births.contains(l)) {
        c.densities.emplace(l, birth.births.at(l).density);
        continue;
      }
      std::vector<double> ws;
      std::vector<DensityPtr> ds;
      for (const auto& [ci, pw] : parts) {
        const Survivor& sv = survivors[ci].at(l);
        ws.push_back(pw);
        ds.push_back(sv.density);
      }
      if (all_particles(ds)) {
        std::size_t target = params.particles_per_label;
        if (target == 0) target = std::get<ParticleCloud>(*ds.front()).size();
        auto stream = stream_for(rng, new_time, kMergeTag, set_key, l);
        c.densities.emplace(l, make_density(mix_and_resample(ws, ds, target, stream)));
      } else {
        c.densities.emplace(l, make_density(mix_densities(ws, ds)));
      }
    }
    comps.push_back(std::move(c));
  }

  FilterState out;
  out.density = normalize(make_dglmb(std::move(comps)));
  out.time = new_time;
  out.labels_used = state.labels_used.set_union(LabelSet{birth_labels});
  return out;
}

FilterState generic_update(const FilterState& state, const JointLogLikelihood& loglik,
                           const FilterParams& params, const RngContext& rng) {
  std::vector<DGlmbComponent> comps;
  std::vector<double> log_weights;

  for (const auto& comp : state.density.components) {
    const std::size_t n = comp.labels.size();
    if (n == 0) {
      comps.push_back(comp);
      log_weights.push_back(comp.weight > 0.0 ? std::log(comp.weight) : kNegInf);
      continue;
    }
    const std::uint64_t comp_key = label_set_key(comp.labels);
    std::vector<const SingleObjectDensity*> dens;
    dens.reserve(n);
    bool grids = true, particles = true;
    for (const Label& l : comp.labels) {
      dens.push_back(&comp.density(l));
      grids = grids && std::holds_alternative<DiscreteGridDensity>(*dens.back());
      particles = particles && std::holds_alternative<ParticleCloud>(*dens.back());
    }
    if (!grids && !particles)
      throw std::invalid_argument("generic_update: mixed density representations");

    const std::vector<Label>& labels = comp.labels.labels();
    DGlmbComponent out;
    out.labels = comp.labels;
    double log_eta = kNegInf;

    if (grids) {
      // exhaustive update over the product grid (exact)
      std::vector<const DiscreteGridDensity*> g(n);
      std::size_t tuples = 1;
      for (std::size_t i = 0; i < n; ++i) {
        g[i] = &std::get<DiscreteGridDensity>(*dens[i]);
        tuples *= g[i]->masses.size();
        if (tuples > (std::size_t{1} << 20))
          throw std::invalid_argument("generic_update: product grid too large");
      }
      std::vector<std::vector<double>> marginals(n);
      for (std::size_t i = 0; i < n; ++i) marginals[i].assign(g[i]->masses.size(), 0.0);
      std::vector<std::size_t> idx(n, 0);
      std::vector<Vec5> states(n);
      for (std::size_t i = 0; i < n; ++i) states[i] = (*g[i]->grid)[0];
      double eta = 0.0;
      while (true) {
        double m = 1.0;
        for (std::size_t i = 0; i < n; ++i) m *= g[i]->masses[idx[i]];
        if (m > 0.0) {
          const double u = m * std::exp(loglik(states, labels));
          eta += u;
          for (std::size_t i = 0; i < n; ++i) marginals[i][idx[i]] += u;
        }
        std::size_t pos = 0;
        while (pos < n) {
          if (++idx[pos] < g[pos]->masses.size()) {
            states[pos] = (*g[pos]->grid)[idx[pos]];
            break;
          }
          idx[pos] = 0;
          states[pos] = (*g[pos]->grid)[0];
          ++pos;
        }
        if (pos == n) break;
      }
      if (eta > 0.0) {
        log_eta = std::log(eta);
        for (std::size_t i = 0; i < n; ++i) {
          DiscreteGridDensity d;
          d.grid = g[i]->grid;
          d.masses = std::move(marginals[i]);
          for (double& mm : d.masses) mm /= eta;
          out.densities.emplace(labels[i], make_density(std::move(d)));
        }
      }
    } else {
      // common-index pairing of the per-label clouds
      std::vector<const ParticleCloud*> c(n);
      const std::size_t np = std::get<ParticleCloud>(*dens[0]).size();
      for (std::size_t i = 0; i < n; ++i) {
        c[i] = &std::get<ParticleCloud>(*dens[i]);
        if (c[i]->size() != np)
          throw std::invalid_argument("generic_update: cloud sizes differ within component");
      }
      std::vector<double> log_prior(np), log_joint(np);
      std::vector<Vec5> states(n);
      for (std::size_t j = 0; j < np; ++j) {
        double lp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          lp += c[i]->weights[j] > 0.0 ? std::log(c[i]->weights[j]) : kNegInf;
          states[i] = c[i]->points[j];
        }
        log_prior[j] = lp;
        log_joint[j] = lp == kNegInf ? kNegInf : lp + loglik(states, labels);
      }
      const double lse_prior = log_sum_exp(log_prior);
      const double lse_joint = log_sum_exp(log_joint);
      if (lse_joint != kNegInf && lse_prior != kNegInf) {
        log_eta = lse_joint - lse_prior;
        std::vector<double> w(np);
        for (std::size_t j = 0; j < np; ++j)
          w[j] = log_joint[j] == kNegInf ? 0.0 : std::exp(log_joint[j] - lse_joint);
        std::size_t target = params.particles_per_label ? params.particles_per_label : np;
        for (std::size_t i = 0; i < n; ++i) {
          ParticleCloud cloud;
          cloud.points = c[i]->points;
          cloud.weights = w;
          auto stream = stream_for(rng, state.time, kResampleTag, comp_key, labels[i]);
          out.densities.emplace(labels[i],
                                make_density(resample_cloud(cloud, target, stream)));
        }
      }
    }
    log_weights.push_back(log_eta == kNegInf || comp.weight <= 0.0
                              ? kNegInf
                              : std::log(comp.weight) + log_eta);
    comps.push_back(std::move(out));
  }

  const double log_total = log_sum_exp(log_weights);
  if (log_total == kNegInf)
    throw DegenerateUpdateError("generic_update: all component evidences are zero");
  std::vector<DGlmbComponent> alive;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (log_weights[i] == kNegInf) continue;
    comps[i].weight = std::exp(log_weights[i] - log_total);
    alive.push_back(std::move(comps[i]));
  }

  FilterState out;
  out.density = truncate(make_dglmb(std::move(alive)), params.max_components,
                         params.min_weight);
  out.time = state.time;
  out.labels_used = state.labels_used;
  return out;
}

FilterState separable_update_path(const FilterState& state, const SeparableLikelihood& lik,
                                  const FilterParams& params, const RngContext& rng) {
  DGlmbDensity post = separable_update(state.density, lik);
  for (auto& comp : post.components) {
    const std::uint64_t comp_key = label_set_key(comp.labels);
    for (auto& [l, dens] : comp.densities) {
      const auto* cloud = std::get_if<ParticleCloud>(dens.get());
      if (!cloud) continue;
      const std::size_t target =
          params.particles_per_label ? params.particles_per_label : cloud->size();
      auto stream = stream_for(rng, state.time, kResampleTag, comp_key, l);
      dens = make_density(resample_cloud(*cloud, target, stream));
    }
  }
  FilterState out;
  out.density = truncate(std::move(post), params.max_components, params.min_weight);
  out.time = state.time;
  out.labels_used = state.labels_used;
  return out;
}

std::vector<TrackEstimate> extract_tracks(const FilterState& state) {
  const auto card = cardinality(state.density);
  std::size_t best_n = 0;
  for (std::size_t n = 1; n < card.masses.size(); ++n)
    if (card.masses[n] > card.masses[best_n]) best_n = n;
  if (best_n == 0) return {};

  const DGlmbComponent* best = nullptr;
  for (const auto& comp : state.density.components) {
    if (comp.labels.size() != best_n) continue;
    if (!best || comp.weight > best->weight) best = &comp;
  }
  std::vector<TrackEstimate> out;
  if (!best) return out;
  for (const Label& l : best->labels)
    out.push_back({l, state.time, density_mean(best->density(l))});
  return out;
}

double effective_sample_size(const ParticleCloud& cloud) {
  double sum = 0.0, sum_sq = 0.0;
  for (double w : cloud.weights) {
    sum += w;
    sum_sq += w * w;
  }
  if (sum_sq <= 0.0) throw std::invalid_argument("effective_sample_size: zero weights");
  return sum * sum / sum_sq;
}

ParticleCloud resample_cloud(const ParticleCloud& cloud, std::size_t n, RngStream& rng) {
  const auto picks = systematic_resample(cloud.weights, n, rng.uniform01());
  ParticleCloud out;
  out.points.reserve(n);
  out.weights.assign(n, 1.0 / static_cast<double>(n));
  for (auto i : picks) out.points.push_back(cloud.points[i]);
  return out;
}

}  // namespace lrfs
