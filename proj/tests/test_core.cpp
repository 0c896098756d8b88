#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "lrfs/labels.hpp"
#include "lrfs/numerics.hpp"
#include "lrfs/rng.hpp"

using namespace lrfs;

TEST_CASE("label ordering is lexicographic on (birth_time, index)") {
  CHECK(Label{0, 0} < Label{0, 1});
  CHECK(Label{0, 5} < Label{1, 0});
  CHECK(Label{2, 1} == Label{2, 1});

  // total order properties on random labels
  RngStream rng(42);
  for (int i = 0; i < 200; ++i) {
    const Label a{std::uint32_t(rng.below(4)), std::uint32_t(rng.below(4))};
    const Label b{std::uint32_t(rng.below(4)), std::uint32_t(rng.below(4))};
    const Label c{std::uint32_t(rng.below(4)), std::uint32_t(rng.below(4))};
    CHECK(((a < b) + (b < a) + (a == b)) == 1);  // trichotomy
    if (a < b && b < c) CHECK(a < c);            // transitivity
  }
}

TEST_CASE("label set keeps canonical order and set semantics") {
  LabelSet s({{1, 0}, {0, 1}, {0, 0}, {0, 1}});
  CHECK(s.size() == 3);
  CHECK(s[0] == Label{0, 0});
  CHECK(s[1] == Label{0, 1});
  CHECK(s[2] == Label{1, 0});
  CHECK(s.contains({0, 1}));
  CHECK_FALSE(s.contains({2, 0}));

  CHECK(LabelSet({{0, 0}}).subset_of(s));
  CHECK_FALSE(s.subset_of(LabelSet({{0, 0}})));
  CHECK(s.set_minus(LabelSet({{0, 1}})).size() == 2);
  CHECK(s.set_union(LabelSet({{3, 3}})).size() == 4);

  // canonical order: prefix comes first
  CHECK(LabelSet{} < LabelSet({{0, 0}}));
  CHECK(LabelSet({{0, 0}}) < LabelSet({{0, 0}, {0, 1}}));
  CHECK(LabelSet({{0, 0}, {0, 1}}) < LabelSet({{0, 1}}));
}

TEST_CASE("distinct label indicator") {
  const Vec5 x = Vec5::Zero();
  CHECK(distinct_label_indicator({}) == 1);
  const std::vector<LabeledState> dup{{x, {0, 0}}, {x, {0, 0}}};
  CHECK(distinct_label_indicator(dup) == 0);
  const std::vector<LabeledState> ok{{x, {0, 0}}, {x, {0, 1}}};
  CHECK(distinct_label_indicator(ok) == 1);

  // permutation invariance
  RngStream rng(7);
  for (int t = 0; t < 50; ++t) {
    std::vector<LabeledState> states;
    for (int i = 0; i < 5; ++i)
      states.push_back({x, {std::uint32_t(rng.below(3)), std::uint32_t(rng.below(3))}});
    const int before = distinct_label_indicator(states);
    for (int s = 0; s < 4; ++s) std::swap(states[rng.below(5)], states[rng.below(5)]);
    CHECK(distinct_label_indicator(states) == before);
  }
}

TEST_CASE("inclusion function") {
  const LabelSet s({{0, 0}, {0, 1}});
  CHECK(inclusion({0, 0}, s) == 1);
  CHECK(inclusion({2, 0}, s) == 0);
  CHECK(inclusion({0, 0}, LabelSet{}) == 0);
}

TEST_CASE("counter rng is reproducible and order-independent") {
  RngStream a(derive_key({1, 2, 3}));
  RngStream b(derive_key({1, 2, 3}));
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_key({1, 2}) != derive_key({2, 1}));

  RngStream u(99);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform01();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
  // rough moments of the normal
  RngStream n(123);
  double mean = 0.0, var = 0.0;
  const int count = 20000;
  std::vector<double> xs(count);
  for (auto& v : xs) v = n.normal();
  for (double v : xs) mean += v / count;
  for (double v : xs) var += (v - mean) * (v - mean) / (count - 1);
  CHECK(std::abs(mean) < 0.03);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("log_sum_exp handles extremes") {
  CHECK(log_sum_exp(kNegInf, kNegInf) == kNegInf);
  CHECK(log_sum_exp(0.0, kNegInf) == 0.0);
  const std::vector<double> v{-1000.0, -1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-12));
  const std::vector<double> big{700.0, 710.0};
  CHECK(log_sum_exp(big) == doctest::Approx(710.0 + std::log1p(std::exp(-10.0))).epsilon(1e-12));
}

TEST_CASE("systematic resampling: uniform weights give the identity") {
  const std::vector<double> w(8, 0.125);
  const auto idx = systematic_resample(w, 8, 0.37);
  for (std::size_t i = 0; i < idx.size(); ++i) CHECK(idx[i] == i);
}

TEST_CASE("systematic resampling matches expected counts") {
  const std::vector<double> w{0.5, 0.25, 0.25};
  const auto idx = systematic_resample(w, 8, 0.0);
  std::vector<int> counts(3, 0);
  for (auto i : idx) counts[i]++;
  CHECK(counts[0] == 4);
  CHECK(counts[1] == 2);
  CHECK(counts[2] == 2);
}
