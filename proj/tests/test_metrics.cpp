#include <cmath>
#include <vector>

#include "doctest.h"
#include "physprop/errors.hpp"
#include "physprop/metrics.hpp"
#include "physprop/rng.hpp"

using namespace physprop;

TEST_SUITE("metrics") {

TEST_CASE("auc on the worked four-point example is 0.75") {
  const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
  const std::vector<int> labels{0, 0, 1, 1};
  CHECK(roc_auc(scores, labels) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("perfect separation gives 1, reversed gives 0") {
  const std::vector<double> sep{0.1, 0.2, 0.8, 0.9};
  const std::vector<int> labels{0, 0, 1, 1};
  CHECK(roc_auc(sep, labels) == 1.0);
  const std::vector<double> rev{4.0, 3.0, 2.0, 1.0};
  CHECK(roc_auc(rev, labels) == 0.0);
}

TEST_CASE("ties count one half") {
  const std::vector<double> scores{0.5, 0.5};
  const std::vector<int> labels{0, 1};
  CHECK(roc_auc(scores, labels) == 0.5);
}

TEST_CASE("single-class label sets are rejected") {
  const std::vector<double> scores{0.1, 0.2};
  const std::vector<int> ones{1, 1}, zeros{0, 0};
  CHECK_THROWS_AS(roc_auc(scores, ones), SingleClassError);
  CHECK_THROWS_AS(roc_auc(scores, zeros), SingleClassError);
}

TEST_CASE("rank-sum auc equals brute-force enumeration, with ties") {
  Rng rng(13579);
  int tried = 0;
  while (tried < 1000) {
    const int n = 2 + static_cast<int>(rng.below(11));  // length <= 12
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    // A coarse value grid forces frequent ties.
    for (int i = 0; i < n; ++i) {
      scores[i] = 0.25 * static_cast<double>(rng.below(8));
      labels[i] = rng.below(2) ? 1 : 0;
    }
    int pos = 0;
    for (const int l : labels) pos += l;
    if (pos == 0 || pos == n) continue;
    ++tried;
    CHECK(roc_auc(scores, labels) ==
          doctest::Approx(roc_auc_bruteforce(scores, labels)).epsilon(1e-12));
  }
}

TEST_CASE("auc of negated scores complements to one") {
  Rng rng(2468);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(30));
    std::vector<double> scores(n), neg(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
      scores[i] = 0.5 * static_cast<double>(rng.below(6));
      neg[i] = -scores[i];
      labels[i] = rng.below(2) ? 1 : 0;
    }
    int pos = 0;
    for (const int l : labels) pos += l;
    if (pos == 0 || pos == n) continue;
    CHECK(std::abs(roc_auc(scores, labels) + roc_auc(neg, labels) - 1.0) <= 1e-15);
  }
}

TEST_CASE("pearson basics") {
  const std::vector<double> x{1.0, 2.0, 3.5, 7.0};
  std::vector<double> y = x;
  CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-15));
  for (auto& v : y) v = -v;
  CHECK(pearson(x, y) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("pearson is affine invariant and symmetric") {
  Rng rng(97531);
  std::vector<double> x(40), y(40);
  for (int i = 0; i < 40; ++i) {
    x[i] = rng.gauss();
    y[i] = 0.6 * x[i] + 0.4 * rng.gauss();
  }
  const double base = pearson(x, y);
  CHECK(pearson(y, x) == doctest::Approx(base).epsilon(1e-14));
  std::vector<double> xa(40);
  for (int i = 0; i < 40; ++i) xa[i] = 3.2 * x[i] - 17.0;
  CHECK(pearson(xa, y) == doctest::Approx(base).epsilon(1e-12));
  // Positive affine map of the ground truth leaves a perfect score perfect.
  std::vector<double> ya(40);
  for (int i = 0; i < 40; ++i) ya[i] = 0.01 * x[i] + 5.0;
  CHECK(pearson(x, ya) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pearson rejects constant input") {
  const std::vector<double> x{1.0, 1.0, 1.0};
  const std::vector<double> y{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(pearson(x, y), ZeroVarianceError);
  CHECK_THROWS_AS(pearson(y, x), ZeroVarianceError);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(pearson(one, one), InsufficientSamplesError);
}

TEST_CASE("relative pairs stay inside viewpoint groups") {
  const std::vector<int> groups{0, 0, 1, 1, 1, 2};
  const std::vector<double> values{0.3, 0.7, 0.5, 0.2, 0.9, 0.4};
  const auto pairs = build_relative_pairs(groups, values, 1000, 5);
  CHECK(pairs.size() == 2 + 6);  // group 0: 2 ordered, group 1: 6, group 2: none
  for (const auto& p : pairs) {
    CHECK(groups[p.first] == groups[p.second]);
    CHECK(p.label == (values[p.first] > values[p.second] ? 1 : 0));
  }
  // The worked label example: first value 0.3 vs second 0.7 -> label 0.
  CHECK(pairs[0].first == 0);
  CHECK(pairs[0].second == 1);
  CHECK(pairs[0].label == 0);
}

TEST_CASE("pair subsampling is deterministic per seed") {
  std::vector<int> groups;
  std::vector<double> values;
  Rng rng(6);
  for (int g = 0; g < 10; ++g)
    for (int k = 0; k < 4; ++k) {
      groups.push_back(g);
      values.push_back(rng.uniform01());
    }
  const auto a = build_relative_pairs(groups, values, 50, 99);
  const auto b = build_relative_pairs(groups, values, 50, 99);
  const auto c = build_relative_pairs(groups, values, 50, 100);
  REQUIRE(a.size() == 50);
  bool same = true, diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].first == b[i].first && a[i].second == b[i].second;
    diff = diff || a[i].first != c[i].first || a[i].second != c[i].second;
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("pairing needs a group with two members") {
  const std::vector<int> groups{0, 1, 2};
  const std::vector<double> values{0.1, 0.2, 0.3};
  CHECK_THROWS_AS(build_relative_pairs(groups, values, 10, 0), InsufficientSamplesError);
}

}  // TEST_SUITE
