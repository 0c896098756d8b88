#include "lrfs/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "lrfs/metrics.hpp"
#include "lrfs/numerics.hpp"
#include "lrfs/synthetic.hpp"

namespace lrfs {
namespace {

double max_instance_diff(const DiscreteInstance& a, const DiscreteInstance& b) {
  double worst = 0.0;
  for (const auto& [set, mass] : a.density) {
    const auto it = b.density.find(set);
    const double other = it == b.density.end() ? 0.0 : it->second;
    worst = std::max(worst, std::abs(mass - other));
  }
  return worst;
}

std::string check_conjugacy() {
  RngStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n_labels = 1 + rng.below(3), n_points = 2 + rng.below(3);
    std::vector<Label> ls;
    for (std::size_t i = 0; i < n_labels; ++i) ls.push_back({0, std::uint32_t(i)});
    const LabelSet labels(ls);
    const auto grid = random_grid(n_points, rng);
    const auto prior = random_dglmb(labels, grid, rng);
    const auto lik = random_separable_likelihood(labels, grid, rng);

    const auto posterior = separable_update(prior, lik);
    const auto exact =
        exact_bayes(dglmb_to_instance(prior, labels), [&](const DiscreteSet& set) {
          double g = 1.0;
          for (const auto& pt : set) g *= lik.gamma((*grid)[pt.point], pt.label);
          return g;
        });
    const double diff = max_instance_diff(dglmb_to_instance(posterior, labels), exact);
    if (diff > 1e-12) return "posterior mismatch " + std::to_string(diff);
  }
  return {};
}

std::string check_preservation() {
  RngStream rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_discrete_instance(1 + rng.below(3), 2 + rng.below(4), rng);
    const auto approx = marginal_product_approx(decompose(inst));
    const auto card = cardinality(approx);
    const auto exact_card = exact_cardinality(inst);
    for (std::size_t n = 0; n < std::max(card.masses.size(), exact_card.masses.size()); ++n) {
      const double a = n < card.masses.size() ? card.masses[n] : 0.0;
      const double b = n < exact_card.masses.size() ? exact_card.masses[n] : 0.0;
      if (std::abs(a - b) > 1e-10) return "cardinality mismatch at n=" + std::to_string(n);
    }
    const auto moments = phd(approx);
    for (const auto& [pt, mass] : exact_phd(inst)) {
      double approx_mass = 0.0;
      const auto it = moments.per_label.find(pt.label);
      if (it != moments.per_label.end()) {
        const auto& g = std::get<DiscreteGridDensity>(it->second.density);
        approx_mass = it->second.mass * g.masses[pt.point];
      }
      if (std::abs(approx_mass - mass) > 1e-10) return "first-moment mismatch";
    }
  }
  return {};
}

std::string check_kld_minimality() {
  RngStream rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    const auto inst = random_discrete_instance(2, 3, rng);
    const auto approx = marginal_product_approx(decompose(inst));
    const double base = kld(inst, dglmb_to_instance(approx, inst.label_space));
    for (int p = 0; p < 50; ++p) {
      DGlmbDensity candidate = approx;
      for (auto& comp : candidate.components)
        for (auto& [l, dens] : comp.densities) {
          auto g = std::get<DiscreteGridDensity>(*dens);
          double total = 0.0;
          for (double& m : g.masses) {
            m *= std::exp(0.4 * rng.normal());
            total += m;
          }
          for (double& m : g.masses) m /= total;
          dens = make_density(std::move(g));
        }
      const double perturbed = kld(inst, dglmb_to_instance(candidate, inst.label_space));
      if (!(base <= perturbed + 1e-12))
        return "perturbation beat the approximation by " + std::to_string(base - perturbed);
    }
  }
  return {};
}

std::string check_prediction_algebra() {
  RngStream rng(19);
  const LabelSet labels({{0, 0}, {0, 1}});
  const auto grid = random_grid(3, rng);
  const auto prior = random_dglmb(labels, grid, rng);
  FilterState state;
  state.density = prior;
  state.time = 0;
  state.labels_used = labels;

  SurvivalModel survival;
  survival.survival_prob = [](const Vec5& x, const Label&) {
    return 0.5 + 0.4 / (1.0 + std::exp(-x(0)));
  };
  survival.transition.sample = [](const Vec5& x, const Label&, RngStream&) { return x; };

  BirthModel birth;
  DiscreteGridDensity pb;
  pb.grid = grid;
  pb.masses.assign(grid->size(), 1.0 / double(grid->size()));
  birth.births.emplace(Label{1, 0}, BirthTrack{0.01, make_density(std::move(pb))});

  FilterParams params{1u << 12, 0.0, 0};
  const auto predicted = predict(state, survival, birth, params, RngContext{1, 1});

  double total = 0.0;
  for (const auto& c : predicted.density.components) total += c.weight;
  if (std::abs(total - 1.0) > 1e-9) return "predicted weights sum to " + std::to_string(total);

  // exhaustive survivor-weight evaluation
  for (const auto& c : predicted.density.components) {
    const LabelSet survivors = c.labels.set_minus(LabelSet({{1, 0}}));
    const bool with_birth = c.labels.contains({1, 0});
    double expected = 0.0;
    for (const auto& pc : prior.components) {
      if (!survivors.subset_of(pc.labels)) continue;
      double w = pc.weight;
      for (const Label& l : pc.labels) {
        const auto& g = std::get<DiscreteGridDensity>(pc.density(l));
        double eta = 0.0;
        for (std::size_t i = 0; i < g.masses.size(); ++i)
          eta += g.masses[i] * survival.survival_prob((*g.grid)[i], l);
        w *= survivors.contains(l) ? eta : 1.0 - eta;
      }
      expected += w;
    }
    expected *= with_birth ? 0.01 : 0.99;
    if (std::abs(expected - c.weight) > 1e-12)
      return "survivor weight mismatch for " + to_string(c.labels);
  }
  return {};
}

std::string check_bessel() {
  const double refs[][2] = {{1e-6, 2.4999999999998437e-13},
                            {1e-3, 2.4999998437500174e-7},
                            {0.1, 0.0024984392338762434},
                            {1.0, 0.23591435850717865},
                            {5.0, 3.3046817758225334},
                            {19.5, 17.102438424565192},
                            {20.5, 18.077103504148475},
                            {100.0, 96.779732689942584},
                            {1000.0, 995.62730888986946},
                            {10000.0, 9994.4759037814323}};
  for (const auto& r : refs) {
    const double got = log_bessel_i0(r[0]);
    if (std::abs(got - r[1]) > 1e-9 * std::abs(r[1]))
      return "log I0(" + std::to_string(r[0]) + ") off by " + std::to_string(got - r[1]);
  }
  return {};
}

std::string check_assignment() {
  RngStream rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + int(rng.below(5));
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform01() * 10.0;
    const double solved = solve_assignment(cost);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += cost(i, perm[i]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (std::abs(solved - best) > 1e-9) return "assignment mismatch";
  }
  return {};
}

std::string check_lmb_cardinality() {
  RngStream rng(29);
  LmbDensity lmb;
  std::vector<double> rs;
  const auto grid = random_grid(2, rng);
  for (int i = 0; i < 4; ++i) {
    const double r = rng.uniform01();
    rs.push_back(r);
    DiscreteGridDensity d;
    d.grid = grid;
    d.masses = {0.5, 0.5};
    lmb.tracks.emplace(Label{0, std::uint32_t(i)}, LmbTrack{r, make_density(std::move(d))});
  }
  const auto card = cardinality(lmb_to_dglmb(lmb));
  const auto expected = poisson_binomial(rs);
  for (std::size_t n = 0; n < expected.size(); ++n) {
    const double got = n < card.masses.size() ? card.masses[n] : 0.0;
    if (std::abs(got - expected[n]) > 1e-10)
      return "cardinality off at n=" + std::to_string(n);
  }
  return {};
}

}  // namespace

int run_selftest(std::ostream& out) {
  const std::pair<const char*, std::function<std::string()>> checks[] = {
      {"separable conjugate update vs exhaustive Bayes", check_conjugacy},
      {"marginal-product approximation preserves cardinality and first moment",
       check_preservation},
      {"marginal-product approximation minimizes KLD under perturbation", check_kld_minimality},
      {"prediction weight algebra vs exhaustive enumeration", check_prediction_algebra},
      {"log Bessel I0 reference values", check_bessel},
      {"assignment solver vs brute force", check_assignment},
      {"LMB expansion cardinality vs convolution", check_lmb_cardinality},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    std::string err;
    try {
      err = fn();
    } catch (const std::exception& e) {
      err = std::string("exception: ") + e.what();
    }
    if (err.empty()) {
      out << "ok   - " << name << "\n";
    } else {
      out << "FAIL - " << name << ": " << err << "\n";
      ++failures;
    }
  }
  return failures;
}

}  // namespace lrfs
