#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "lrfs/metrics.hpp"
#include "lrfs/rng.hpp"

using namespace lrfs;

namespace {

std::vector<Eigen::Vector2d> random_points(std::size_t n, RngStream& rng, double scale = 100.0) {
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < n; ++i)
    out.emplace_back(scale * rng.uniform01(), scale * rng.uniform01());
  return out;
}

double brute_force_assignment(const Eigen::MatrixXd& cost) {
  const int n = int(cost.rows());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += cost(i, perm[i]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("assignment solver equals brute force up to size six") {
  RngStream rng(61);
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + int(rng.below(6));
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = 50.0 * rng.uniform01();
    std::vector<int> assignment;
    const double solved = solve_assignment(cost, &assignment);
    CHECK(solved == doctest::Approx(brute_force_assignment(cost)).epsilon(1e-10));
    // assignment is a permutation achieving the reported cost
    std::vector<bool> used(n, false);
    double check = 0.0;
    for (int i = 0; i < n; ++i) {
      REQUIRE(assignment[i] >= 0);
      REQUIRE(assignment[i] < n);
      CHECK_FALSE(used[assignment[i]]);
      used[assignment[i]] = true;
      check += cost(i, assignment[i]);
    }
    CHECK(check == doctest::Approx(solved).epsilon(1e-10));
  }
}

TEST_CASE("ospa distances") {
  const OspaParams params{50.0, 1.0};

  SUBCASE("identical sets give zero") {
    RngStream rng(62);
    const auto pts = random_points(4, rng);
    CHECK(ospa(pts, pts, params) == doctest::Approx(0.0));
  }
  SUBCASE("empty against empty is zero") {
    CHECK(ospa({}, {}, params) == 0.0);
  }
  SUBCASE("empty estimate pays the full cutoff") {
    RngStream rng(63);
    const auto truth = random_points(3, rng);
    CHECK(ospa({}, truth, params) == doctest::Approx(50.0));
  }
  SUBCASE("singletons thirty meters apart") {
    const std::vector<Eigen::Vector2d> a{{0.0, 0.0}};
    const std::vector<Eigen::Vector2d> b{{30.0, 0.0}};
    CHECK(ospa(a, b, params) == doctest::Approx(30.0).epsilon(1e-12));
  }
  SUBCASE("two against two picks the best pairing") {
    // cross distances (10, 60, 60, 10)
    const std::vector<Eigen::Vector2d> est{{0.0, 0.0}, {100.0, 0.0}};
    const std::vector<Eigen::Vector2d> truth{{10.0, 0.0}, {110.0, 0.0}};
    // d(e0,t0)=10, d(e0,t1)=110->50, d(e1,t0)=90->50, d(e1,t1)=10
    CHECK(ospa(est, truth, params) == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("cardinality mismatch charges cutoff per missing target") {
    const std::vector<Eigen::Vector2d> est{{0.0, 0.0}};
    const std::vector<Eigen::Vector2d> truth{{0.0, 0.0}, {1000.0, 0.0}};
    CHECK(ospa(est, truth, params) == doctest::Approx(25.0).epsilon(1e-12));
  }
  SUBCASE("bounded by the cutoff and symmetric") {
    RngStream rng(64);
    for (int t = 0; t < 50; ++t) {
      const auto a = random_points(rng.below(5), rng, 500.0);
      const auto b = random_points(rng.below(5), rng, 500.0);
      const double ab = ospa(a, b, params);
      CHECK(ab <= 50.0 + 1e-12);
      CHECK(ab >= 0.0);
      CHECK(ab == doctest::Approx(ospa(b, a, params)).epsilon(1e-12));
    }
  }
  SUBCASE("invariant under permutation of either set") {
    RngStream rng(65);
    auto a = random_points(4, rng);
    auto b = random_points(4, rng);
    const double base = ospa(a, b, params);
    std::swap(a[0], a[3]);
    std::swap(b[1], b[2]);
    CHECK(ospa(a, b, params) == doctest::Approx(base).epsilon(1e-12));
  }
  SUBCASE("triangle inequality on random triples") {
    RngStream rng(66);
    for (double order : {1.0, 2.0}) {
      const OspaParams p{50.0, order};
      for (int t = 0; t < 60; ++t) {
        const auto a = random_points(1 + rng.below(4), rng, 200.0);
        const auto b = random_points(1 + rng.below(4), rng, 200.0);
        const auto c = random_points(1 + rng.below(4), rng, 200.0);
        CHECK(ospa(a, c, p) <= ospa(a, b, p) + ospa(b, c, p) + 1e-9);
      }
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS((void)ospa({}, {}, OspaParams{0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)ospa({}, {}, OspaParams{50.0, 0.5}), std::invalid_argument);
  }
}

TEST_CASE("monte carlo aggregation") {
  SUBCASE("single trial is its own mean with zero standard error") {
    const auto stats = mc_aggregate({{1.0, 2.0, 3.0}});
    CHECK(stats.mean == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(stats.se == std::vector<double>{0.0, 0.0, 0.0});
  }
  SUBCASE("two constant trials average") {
    const auto stats = mc_aggregate({{2.0, 2.0}, {4.0, 4.0}});
    CHECK(stats.mean[0] == doctest::Approx(3.0));
    CHECK(stats.se[0] == doctest::Approx(1.0));  // sd = sqrt(2), se = 1
  }
  SUBCASE("gaussian samples concentrate by the central limit theorem") {
    RngStream rng(67);
    const double mu = 5.0, sigma = 2.0;
    std::vector<std::vector<double>> trials;
    for (int t = 0; t < 100; ++t) trials.push_back({mu + sigma * rng.normal()});
    const auto stats = mc_aggregate(trials);
    CHECK(std::abs(stats.mean[0] - mu) < 4.0 * sigma / std::sqrt(100.0));
  }
  SUBCASE("empty input and ragged series are rejected") {
    CHECK_THROWS_AS((void)mc_aggregate({}), std::invalid_argument);
    CHECK_THROWS_AS((void)mc_aggregate({{1.0}, {1.0, 2.0}}), std::invalid_argument);
  }
}
