#include "lrfs/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace lrfs {

std::shared_ptr<const std::vector<Vec5>> random_grid(std::size_t n_points, RngStream& rng) {
  auto grid = std::make_shared<std::vector<Vec5>>();
  grid->reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    Vec5 x;
    for (int d = 0; d < 5; ++d) x(d) = 10.0 * rng.uniform01() - 5.0;
    grid->push_back(x);
  }
  return grid;
}

DiscreteInstance random_discrete_instance(std::size_t n_labels, std::size_t n_points,
                                          RngStream& rng) {
  DiscreteInstance inst;
  std::vector<Label> labels;
  for (std::size_t i = 0; i < n_labels; ++i)
    labels.push_back({static_cast<std::uint32_t>(rng.below(4)), static_cast<std::uint32_t>(i)});
  inst.label_space = LabelSet(labels);
  inst.grid = random_grid(n_points, rng);
  double total = 0.0;
  for (const auto& set : enumerate_sets(inst.label_space, n_points)) {
    const double m = rng.uniform01();
    inst.density.emplace(set, m);
    total += m;
  }
  for (auto& [set, m] : inst.density) m /= total;
  return inst;
}

DGlmbDensity random_dglmb(const LabelSet& labels,
                          const std::shared_ptr<const std::vector<Vec5>>& grid,
                          RngStream& rng) {
  const std::size_t n = labels.size();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::vector<DGlmbComponent> comps;
  for (std::uint64_t mask = 0; mask <= full; ++mask) {
    // drop some intermediate subsets; keep {} and the full set
    if (mask != 0 && mask != full && rng.uniform01() < 0.25) continue;
    std::vector<Label> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::uint64_t{1} << i)) subset.push_back(labels[i]);
    DGlmbComponent c;
    c.labels = LabelSet(subset);
    c.weight = 0.1 + rng.uniform01();
    for (const Label& l : c.labels) {
      DiscreteGridDensity d;
      d.grid = grid;
      double total = 0.0;
      for (std::size_t i = 0; i < grid->size(); ++i) {
        d.masses.push_back(0.05 + rng.uniform01());
        total += d.masses.back();
      }
      for (double& m : d.masses) m /= total;
      c.densities.emplace(l, make_density(std::move(d)));
    }
    comps.push_back(std::move(c));
  }
  return normalize(make_dglmb(std::move(comps)));
}

std::size_t find_point_index(const std::vector<Vec5>& grid, const Vec5& x) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] == x) return i;
  throw std::invalid_argument("find_point_index: point not on grid");
}

SeparableLikelihood random_separable_likelihood(
    const LabelSet& labels, const std::shared_ptr<const std::vector<Vec5>>& grid,
    RngStream& rng, double lo, double hi) {
  auto table = std::make_shared<std::map<std::pair<Label, std::size_t>, double>>();
  for (const Label& l : labels)
    for (std::size_t i = 0; i < grid->size(); ++i)
      (*table)[{l, i}] = std::log(lo) + rng.uniform01() * (std::log(hi) - std::log(lo));
  SeparableLikelihood lik;
  lik.log_gamma = [table, grid](const Vec5& x, const Label& l) {
    return table->at({l, find_point_index(*grid, x)});
  };
  return lik;
}

double JointLikelihoodTable::linear(const DiscreteSet& set) const {
  if (set.empty()) return 1.0;
  return values.at(set);
}

JointLogLikelihood JointLikelihoodTable::log_callable() const {
  return [table = *this](std::span<const Vec5> xs, std::span<const Label> ls) {
    DiscreteSet set;
    set.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
      set.push_back({ls[i], static_cast<std::uint32_t>(find_point_index(*table.grid, xs[i]))});
    std::sort(set.begin(), set.end());
    return std::log(table.linear(set));
  };
}

JointLikelihoodTable random_joint_likelihood(
    const LabelSet& labels, const std::shared_ptr<const std::vector<Vec5>>& grid,
    RngStream& rng, double lo, double hi) {
  JointLikelihoodTable table;
  table.grid = grid;
  for (const auto& set : enumerate_sets(labels, grid->size())) {
    if (set.empty()) continue;
    table.values.emplace(set, lo + rng.uniform01() * (hi - lo));
  }
  return table;
}

std::vector<double> poisson_binomial(std::span<const double> existence) {
  std::vector<double> pmf{1.0};
  for (double r : existence) {
    std::vector<double> next(pmf.size() + 1, 0.0);
    for (std::size_t n = 0; n < pmf.size(); ++n) {
      next[n] += pmf[n] * (1.0 - r);
      next[n + 1] += pmf[n] * r;
    }
    pmf = std::move(next);
  }
  return pmf;
}

}  // namespace lrfs
