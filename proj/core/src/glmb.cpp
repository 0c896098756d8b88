#include "lrfs/glmb.hpp"

#include <algorithm>
#include <cmath>

namespace lrfs {

bool same_grid(const std::vector<Vec5>& a, const std::vector<Vec5>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

DensityPtr make_density(ParticleCloud cloud) {
  return std::make_shared<const SingleObjectDensity>(std::move(cloud));
}

DensityPtr make_density(DiscreteGridDensity grid) {
  return std::make_shared<const SingleObjectDensity>(std::move(grid));
}

DensityPtr make_density(SingleObjectDensity d) {
  return std::make_shared<const SingleObjectDensity>(std::move(d));
}

Vec5 density_mean(const SingleObjectDensity& d) {
  Vec5 mean = Vec5::Zero();
  double total = 0.0;
  for_each_mass(d, [&](const Vec5& x, double w) {
    mean += w * x;
    total += w;
  });
  if (total <= 0.0) throw DegenerateDensityError("density has zero total mass");
  return mean / total;
}

double density_weight_sum(const SingleObjectDensity& d) {
  double total = 0.0;
  for_each_mass(d, [&](const Vec5&, double w) { total += w; });
  return total;
}

void validate_density(const SingleObjectDensity& d, double tol) {
  double total = 0.0;
  for_each_mass(d, [&](const Vec5&, double w) {
    if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("negative density weight");
    total += w;
  });
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("density weights sum to " + std::to_string(total));
  if (const auto* g = std::get_if<DiscreteGridDensity>(&d)) {
    if (!g->grid || g->grid->size() != g->masses.size())
      throw std::invalid_argument("grid density size mismatch");
  } else {
    const auto& c = std::get<ParticleCloud>(d);
    if (c.points.size() != c.weights.size())
      throw std::invalid_argument("particle cloud size mismatch");
  }
}

DGlmbDensity make_dglmb(std::vector<DGlmbComponent> components) {
  std::sort(components.begin(), components.end(),
            [](const DGlmbComponent& a, const DGlmbComponent& b) { return a.labels < b.labels; });
  for (std::size_t i = 1; i < components.size(); ++i) {
    if (components[i - 1].labels == components[i].labels)
      throw std::invalid_argument("duplicate label set in delta-GLMB");
  }
  return DGlmbDensity{std::move(components)};
}

void validate(const DGlmbDensity& d, double tol) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const auto& c = d.components[i];
    if (c.weight < 0.0 || !std::isfinite(c.weight))
      throw std::invalid_argument("negative component weight");
    total += c.weight;
    if (i > 0 && !(d.components[i - 1].labels < c.labels))
      throw std::invalid_argument("components not in canonical order");
    if (c.densities.size() != c.labels.size())
      throw std::invalid_argument("component density keys do not match label set");
    for (const Label& l : c.labels) {
      auto it = c.densities.find(l);
      if (it == c.densities.end() || !it->second)
        throw std::invalid_argument("missing density for label " + to_string(l));
      validate_density(*it->second, tol);
    }
  }
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("component weights sum to " + std::to_string(total));
}

double CardinalityDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < masses.size(); ++n) m += static_cast<double>(n) * masses[n];
  return m;
}

double LabeledPhd::total_mass() const {
  double m = 0.0;
  for (const auto& [l, e] : per_label) m += e.mass;
  return m;
}

CardinalityDistribution cardinality(const DGlmbDensity& d) {
  std::size_t n_max = 0;
  for (const auto& c : d.components) n_max = std::max(n_max, c.labels.size());
  CardinalityDistribution out;
  out.masses.assign(n_max + 1, 0.0);
  for (const auto& c : d.components) out.masses[c.labels.size()] += c.weight;
  return out;
}

SingleObjectDensity mix_densities(std::span<const double> weights,
                                  std::span<const DensityPtr> parts) {
  if (parts.empty() || weights.size() != parts.size())
    throw std::invalid_argument("mix_densities: size mismatch");
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) throw DegenerateDensityError("mix_densities: zero total weight");

  // pointwise combination when all parts share one grid
  const auto* first_grid = std::get_if<DiscreteGridDensity>(parts[0].get());
  bool all_same_grid = first_grid != nullptr;
  for (std::size_t i = 1; all_same_grid && i < parts.size(); ++i) {
    const auto* g = std::get_if<DiscreteGridDensity>(parts[i].get());
    all_same_grid = g && (g->grid == first_grid->grid || same_grid(*g->grid, *first_grid->grid));
  }
  if (all_same_grid) {
    DiscreteGridDensity out;
    out.grid = first_grid->grid;
    out.masses.assign(first_grid->masses.size(), 0.0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto& g = std::get<DiscreteGridDensity>(*parts[i]);
      const double s = weights[i] / total;
      for (std::size_t j = 0; j < g.masses.size(); ++j) out.masses[j] += s * g.masses[j];
    }
    return out;
  }

  ParticleCloud out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const double s = weights[i] / total;
    if (s == 0.0) continue;
    for_each_mass(*parts[i], [&](const Vec5& x, double w) {
      out.points.push_back(x);
      out.weights.push_back(s * w);
    });
  }
  return out;
}

LabeledPhd phd(const DGlmbDensity& d) {
  std::map<Label, std::pair<std::vector<double>, std::vector<DensityPtr>>> parts;
  for (const auto& c : d.components) {
    for (const Label& l : c.labels) {
      auto& [ws, ds] = parts[l];
      ws.push_back(c.weight);
      ds.push_back(c.densities.at(l));
    }
  }
  LabeledPhd out;
  for (auto& [l, wd] : parts) {
    auto& [ws, ds] = wd;
    double mass = 0.0;
    for (double w : ws) mass += w;
    LabeledPhd::Entry e;
    e.mass = mass;
    if (mass > 0.0) {
      e.density = mix_densities(ws, ds);
    } else {
      e.density = *ds.front();
    }
    out.per_label.emplace(l, std::move(e));
  }
  return out;
}

double lmb_weight(const LmbDensity& lmb, const LabelSet& L) {
  for (const Label& l : L)
    if (!lmb.tracks.contains(l)) return 0.0;
  // direct product; switch to log accumulation for long products
  if (lmb.tracks.size() <= 32) {
    double w = 1.0;
    for (const auto& [l, trk] : lmb.tracks) {
      const double f = L.contains(l) ? trk.existence : 1.0 - trk.existence;
      w *= f;
      if (w == 0.0) return 0.0;
    }
    return w;
  }
  double log_w = 0.0;
  for (const auto& [l, trk] : lmb.tracks) {
    const double f = L.contains(l) ? trk.existence : 1.0 - trk.existence;
    if (f <= 0.0) return 0.0;
    log_w += std::log(f);
  }
  return std::exp(log_w);
}

DGlmbDensity lmb_to_dglmb(const LmbDensity& lmb, std::size_t max_tracks) {
  const std::size_t n = lmb.tracks.size();
  if (n > max_tracks)
    throw std::invalid_argument("lmb_to_dglmb: " + std::to_string(n) +
                                " tracks exceeds cap of " + std::to_string(max_tracks));
  std::vector<Label> order;
  order.reserve(n);
  for (const auto& [l, t] : lmb.tracks) order.push_back(l);

  std::vector<DGlmbComponent> comps;
  comps.reserve(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Label> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) subset.push_back(order[i]);
    DGlmbComponent c;
    c.labels = LabelSet(subset);
    c.weight = lmb_weight(lmb, c.labels);
    for (const Label& l : c.labels) c.densities.emplace(l, lmb.tracks.at(l).density);
    comps.push_back(std::move(c));
  }
  return normalize(make_dglmb(std::move(comps)));
}

DGlmbDensity normalize(DGlmbDensity d) {
  double total = 0.0;
  for (const auto& c : d.components) {
    if (c.weight < 0.0 || !std::isfinite(c.weight))
      throw std::invalid_argument("normalize: invalid component weight");
    total += c.weight;
  }
  if (total <= 0.0) throw DegenerateDensityError("normalize: all component weights are zero");
  for (auto& c : d.components) c.weight /= total;
  return d;
}

DGlmbDensity truncate(DGlmbDensity d, std::size_t max_components, double min_weight) {
  if (max_components < 1) throw std::invalid_argument("truncate: max_components must be >= 1");
  std::vector<std::size_t> order(d.components.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // weight descending, canonical label-set order on ties; input is already
  // canonically sorted so index order encodes the tie-break
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return d.components[a].weight > d.components[b].weight;
  });

  std::vector<DGlmbComponent> kept;
  for (std::size_t i = 0; i < order.size() && kept.size() < max_components; ++i) {
    const auto& c = d.components[order[i]];
    if (c.weight < min_weight) break;  // descending: nothing later qualifies
    kept.push_back(c);
  }
  if (kept.empty() && !d.components.empty()) kept.push_back(d.components[order[0]]);
  return normalize(make_dglmb(std::move(kept)));
}

}  // namespace lrfs
