#include "lrfs/discrete.hpp"

#include <cmath>

namespace lrfs {

LabelSet labels_of(const DiscreteSet& s) {
  std::vector<Label> out;
  out.reserve(s.size());
  for (const auto& p : s) out.push_back(p.label);
  return LabelSet(std::move(out));
}

void DiscreteInstance::validate(double tol) const {
  if (label_space.size() > kMaxLabels)
    throw std::invalid_argument("discrete instance: too many labels");
  if (!grid || grid->empty() || grid->size() > kMaxPoints)
    throw std::invalid_argument("discrete instance: bad grid");
  double total = 0.0;
  for (const auto& [set, mass] : density) {
    if (mass < 0.0 || !std::isfinite(mass))
      throw std::invalid_argument("discrete instance: negative mass");
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!label_space.contains(set[i].label) || set[i].point >= grid->size())
        throw std::invalid_argument("discrete instance: set outside space");
      if (i > 0 && !(set[i - 1].label < set[i].label))
        throw std::invalid_argument("discrete instance: set not canonical");
    }
    total += mass;
  }
  if (std::abs(total - 1.0) > tol)
    throw std::invalid_argument("discrete instance mass sums to " + std::to_string(total));
}

std::vector<DiscreteSet> enumerate_sets(const LabelSet& labels, std::size_t n_points) {
  const std::size_t n = labels.size();
  std::vector<DiscreteSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<Label> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) subset.push_back(labels[i]);
    // all grid assignments for this label subset
    const std::size_t k = subset.size();
    std::vector<std::uint32_t> idx(k, 0);
    while (true) {
      DiscreteSet s;
      s.reserve(k);
      for (std::size_t i = 0; i < k; ++i) s.push_back({subset[i], idx[i]});
      out.push_back(std::move(s));
      // odometer increment
      std::size_t pos = 0;
      while (pos < k) {
        if (++idx[pos] < n_points) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == k) break;
    }
  }
  return out;
}

double set_integral(const DiscreteInstance& inst,
                    const std::function<double(const DiscreteSet&)>& f) {
  double total = 0.0;
  for (const auto& [set, mass] : inst.density) total += f(set) * mass;
  return total;
}

DiscreteInstance exact_bayes(const DiscreteInstance& prior,
                             const std::function<double(const DiscreteSet&)>& likelihood) {
  DiscreteInstance post = prior;
  double normalizer = 0.0;
  for (auto& [set, mass] : post.density) {
    mass *= likelihood(set);
    normalizer += mass;
  }
  if (normalizer <= 0.0) throw DegenerateDensityError("exact_bayes: zero normalizer");
  for (auto& [set, mass] : post.density) mass /= normalizer;
  return post;
}

double kld(const DiscreteInstance& p, const DiscreteInstance& q) {
  double out = 0.0;
  for (const auto& [set, pm] : p.density) {
    if (pm <= 0.0) continue;
    const auto it = q.density.find(set);
    const double qm = it == q.density.end() ? 0.0 : it->second;
    if (qm <= 0.0) return std::numeric_limits<double>::infinity();
    out += pm * std::log(pm / qm);
  }
  return out;
}

CardinalityDistribution exact_cardinality(const DiscreteInstance& inst) {
  CardinalityDistribution out;
  out.masses.assign(inst.label_space.size() + 1, 0.0);
  for (const auto& [set, mass] : inst.density) out.masses[set.size()] += mass;
  while (out.masses.size() > 1 && out.masses.back() == 0.0) out.masses.pop_back();
  return out;
}

std::map<DiscretePoint, double> exact_phd(const DiscreteInstance& inst) {
  std::map<DiscretePoint, double> out;
  for (const Label& l : inst.label_space)
    for (std::uint32_t g = 0; g < inst.grid->size(); ++g) out[{l, g}] = 0.0;
  for (const auto& [set, mass] : inst.density)
    for (const auto& pt : set) out[pt] += mass;
  return out;
}

DiscreteInstance dglmb_to_instance(const DGlmbDensity& d, const LabelSet& label_space) {
  DiscreteInstance inst;
  inst.label_space = label_space;
  // shared grid across every density
  for (const auto& c : d.components) {
    for (const auto& [l, dens] : c.densities) {
      const auto* g = std::get_if<DiscreteGridDensity>(dens.get());
      if (!g) throw std::invalid_argument("dglmb_to_instance: needs grid densities");
      if (!inst.grid)
        inst.grid = g->grid;
      else if (g->grid != inst.grid && !same_grid(*g->grid, *inst.grid))
        throw std::invalid_argument("dglmb_to_instance: densities on different grids");
    }
  }
  if (!inst.grid) throw std::invalid_argument("dglmb_to_instance: no grid densities present");

  for (const auto& set : enumerate_sets(label_space, inst.grid->size())) {
    double mass = 0.0;
    for (const auto& c : d.components) {
      if (c.labels != labels_of(set)) continue;
      double m = c.weight;
      for (const auto& pt : set) {
        const auto& g = std::get<DiscreteGridDensity>(c.density(pt.label));
        m *= g.masses[pt.point];
      }
      mass += m;
    }
    inst.density.emplace(set, mass);
  }
  return inst;
}

}  // namespace lrfs
