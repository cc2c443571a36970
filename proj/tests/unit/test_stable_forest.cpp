#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "levynet/error.hpp"
#include "levynet/parallel.hpp"
#include "levynet/stable_forest.hpp"
#include "levynet/stats.hpp"

using namespace levynet;
using namespace levynet::stable_forest;

namespace {

// sum_{k>=1} f(k) k^{-s} with an Euler-Maclaurin tail from N on
double power_sum(double s, int power_of_k, std::size_t n = 200000) {
  const double e = s - power_of_k;
  double sum = 0.0;
  for (std::size_t k = n - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -e);
  const double nn = static_cast<double>(n);
  sum += std::pow(nn, 1.0 - e) / (e - 1.0) + 0.5 * std::pow(nn, -e) + e * std::pow(nn, -e - 1.0) / 12.0;
  return sum;
}

std::vector<std::int64_t> brute_heights(const std::vector<std::int64_t>& walk) {
  const std::size_t n = walk.size() - 1;
  std::vector<std::int64_t> h(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    // scan j downward keeping min(walk[j..k])
    std::int64_t m = walk[k];
    for (std::size_t j = k; j-- > 0;) {
      m = std::min(m, walk[j]);
      if (walk[j] == m) ++h[k];
    }
  }
  return h;
}

void expect_consistent(const ForestProfile& p) {
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_EQ(p.walk[k + 1] - p.walk[k], p.offspring_counts[k] - 1);
  EXPECT_EQ(std::accumulate(p.level_counts.begin(), p.level_counts.end(), std::int64_t{0}),
            static_cast<std::int64_t>(p.size()));
  EXPECT_EQ(level_profile(p.heights), p.level_counts);
  EXPECT_EQ(height_process(p.walk), p.heights);
}

}  // namespace

TEST(OffspringLaw, MeanIsOneBySeries) {
  for (double alpha : {1.2, 1.5, 1.8}) {
    const auto law = offspring_law(alpha);
    const double zeta = power_sum(alpha, 0);
    // pmf(k) = k^{-1-alpha} / zeta(alpha)
    EXPECT_NEAR(law.pmf(7) * zeta * std::pow(7.0, 1.0 + alpha), 1.0, 1e-12);
    const double mean = power_sum(1.0 + alpha, 1) / zeta;
    EXPECT_NEAR(mean, 1.0, 1e-12);
    const double mass = law.p0() + power_sum(1.0 + alpha, 0) / zeta;
    EXPECT_NEAR(mass, 1.0, 1e-12);
    EXPECT_TRUE(law.infinite_variance());
  }
}

TEST(OffspringLaw, AtomAtZeroForThreeHalves) {
  const auto law = offspring_law(1.5);
  EXPECT_NEAR(law.p0(), 1.0 - power_sum(2.5, 0) / power_sum(1.5, 0), 1e-12);
  EXPECT_NEAR(law.p0(), 0.4864876, 1e-7);
}

TEST(OffspringLaw, SamplerMatchesPmf) {
  const auto law = offspring_law(1.5);
  Rng rng(3);
  const int n = 400000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = law.sample(rng);
    if (k < 5) ++counts[k];
  }
  for (std::uint64_t k = 0; k < 5; ++k) {
    const double p = law.pmf(k);
    EXPECT_LT(std::abs(counts[k] / double(n) - p), 3.0 * harness::binomial_se(p, n)) << k;
  }
}

TEST(Heights, ChainExample) {
  const std::vector<std::int64_t> off{1, 1, 0};
  const auto walk = lukasiewicz_walk(off);
  EXPECT_EQ(walk, (std::vector<std::int64_t>{0, 0, 0, -1}));
  const auto h = height_process(walk);
  EXPECT_EQ(h, (std::vector<std::int64_t>{0, 1, 2}));
  EXPECT_EQ(level_profile(h), (std::vector<std::int64_t>{1, 1, 1}));
}

TEST(Heights, TwoLeafExample) {
  const std::vector<std::int64_t> off{2, 0, 0};
  const auto walk = lukasiewicz_walk(off);
  EXPECT_EQ(walk, (std::vector<std::int64_t>{0, 1, 0, -1}));
  const auto h = height_process(walk);
  EXPECT_EQ(h, (std::vector<std::int64_t>{0, 1, 1}));
  EXPECT_EQ(level_profile(h), (std::vector<std::int64_t>{1, 2}));
}

TEST(Heights, MalformedWalkRejected) {
  EXPECT_THROW(height_process(std::vector<std::int64_t>{0, 1, 0}), StructureError);
  EXPECT_THROW(height_process(std::vector<std::int64_t>{0, -2}), StructureError);
  EXPECT_THROW(height_process(std::vector<std::int64_t>{1, 0}), StructureError);
  EXPECT_THROW(lukasiewicz_walk(std::vector<std::int64_t>{-1}), StructureError);
}

TEST(Heights, BruteForceAgreesOnRandomForest) {
  const auto law = offspring_law(1.5);
  Rng rng(4);
  for (int i = 0; i < 3; ++i) {
    const auto tree = sample_conditioned_tree(law, 1000, rng);
    EXPECT_EQ(brute_heights(tree.walk), tree.heights);
    expect_consistent(tree);
    // a single tree first reaches -1 at the very end
    for (std::size_t k = 0; k + 1 < tree.walk.size(); ++k) EXPECT_GE(tree.walk[k], 0);
    EXPECT_EQ(tree.walk.back(), -1);
  }
  auto forest = sample_forest(law, 25, 1000, rng, 2000);
  while (!forest) forest = sample_forest(law, 25, 1000, rng, 2000);
  EXPECT_EQ(brute_heights(forest->walk), forest->heights);
  EXPECT_EQ(forest->roots, 25u);
  EXPECT_EQ(forest->level_counts[0], 25);
}

TEST(Attachment, RightmostAndLeftmostExamples) {
  const auto right = profile_from_offspring(1.5, {4, 0, 0, 0, 2, 0, 0});
  EXPECT_EQ(attachment_positions(right, 1, 2), (std::vector<double>{0.0}));
  const auto left = profile_from_offspring(1.5, {4, 2, 0, 0, 0, 0, 0});
  EXPECT_EQ(attachment_positions(left, 1, 2), (std::vector<double>{0.75}));
  EXPECT_THROW(attachment_positions(left, 5, 2), RangeError);
}

TEST(Attachment, UniformOverConditionedTrees) {
  const auto law = offspring_law(1.5);
  const std::size_t n = 10000;
  const auto big = static_cast<std::int64_t>(std::ceil(std::pow(double(n), 1.0 / 1.5) / 4.0));
  const auto pos = generate_ensemble<std::vector<double>>(300, 10, 77, 1, 0, [&](Rng& rng) {
    const auto tree = sample_conditioned_tree(law, n, rng);
    std::vector<double> out;
    for (std::size_t h = 0; h < tree.level_counts.size(); ++h) {
      const double z = static_cast<double>(tree.level_counts[h]);
      for (double u : attachment_positions(tree, h, big)) out.push_back(u + rng.uniform() / z);
    }
    return out;
  });
  std::vector<double> pooled;
  for (const auto& p : pos) pooled.insert(pooled.end(), p.begin(), p.end());
  ASSERT_GE(pooled.size(), 100u);
  EXPECT_GT(harness::ks_test(pooled, [](double u) { return std::clamp(u, 0.0, 1.0); }).p_value, 0.01)
      << pooled.size() << " positions";
}

TEST(Correspondence, HoldsOnSamples) {
  const auto law = offspring_law(1.5);
  Rng rng(5);
  std::size_t big_total = 0;
  for (int i = 0; i < 20; ++i) {
    const auto tree = sample_conditioned_tree(law, 10000, rng);
    expect_consistent(tree);
    const auto rep = check_jump_correspondence(tree, 100);
    EXPECT_TRUE(rep.ok);
    big_total += rep.big_vertices;
  }
  EXPECT_GT(big_total, 0u);
}

TEST(Correspondence, DetectsBrokenProfile) {
  auto p = profile_from_offspring(1.5, {2, 1, 0, 0});
  EXPECT_TRUE(check_jump_correspondence(p, 2).ok);
  p.heights[2] = 1;
  EXPECT_FALSE(check_jump_correspondence(p, 2).ok);
}

TEST(Forest, TruncationMarksCut) {
  const auto law = offspring_law(1.5);
  Rng rng(6);
  const auto f = sample_forest(law, 50, 3, rng, 1'000'000);
  ASSERT_TRUE(f);
  EXPECT_LE(f->level_counts.size(), 4u);
  if (f->level_counts.size() == 4) EXPECT_EQ(f->truncated_at, std::optional<std::size_t>(3));
  expect_consistent(*f);
}

TEST(Forest, GenerationSizesStartAtRoots) {
  const auto law = offspring_law(1.5);
  Rng rng(7);
  const auto z = sample_generation_sizes(law, 100, 5, rng);
  ASSERT_EQ(z.size(), 6u);
  EXPECT_EQ(z[0], 100);
  for (auto v : z) EXPECT_GE(v, 0);
}

TEST(Forest, MaxHeightScaling) {
  const auto law = offspring_law(1.5);
  auto median_height = [&](std::size_t n, std::uint64_t stream) {
    auto h = generate_ensemble<double>(41, 1, 88, stream, 0, [&](Rng& rng) {
      return static_cast<double>(max_height(sample_conditioned_tree(law, n, rng)));
    });
    std::nth_element(h.begin(), h.begin() + 20, h.end());
    return h[20];
  };
  const double ratio = median_height(10000, 2) / median_height(1000, 3);
  const double target = std::pow(10.0, 1.0 - 1.0 / 1.5);
  EXPECT_GT(ratio, target / 2.0) << ratio;
  EXPECT_LT(ratio, target * 2.0) << ratio;
}
