#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "levynet/error.hpp"
#include "levynet/random.hpp"
#include "levynet/stats.hpp"

using namespace levynet;
using namespace levynet::harness;

namespace {

std::vector<double> uniforms(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform();
  return v;
}

double uniform_cdf(double x) { return x <= 0 ? 0.0 : (x >= 1 ? 1.0 : x); }

}  // namespace

TEST(Ks, NullCase) {
  const auto s = uniforms(5000, 11);
  const auto r = ks_test(s, uniform_cdf);
  EXPECT_GT(r.p_value, 0.01);
  EXPECT_EQ(r.n, 5000u);
}

TEST(Ks, GrossMismatchAgainstFrechet) {
  const auto s = uniforms(10000, 12);
  const auto r = ks_test(s, [](double x) { return x <= 0 ? 0.0 : std::exp(-1.0 / (x * x)); });
  EXPECT_LT(r.p_value, 1e-6);
}

TEST(Ks, StatisticInUnitInterval) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = uniforms(50, seed);
    const auto r = ks_test(s, [](double x) { return uniform_cdf(x * x * 3.0); });
    EXPECT_GE(r.statistic, 0.0);
    EXPECT_LE(r.statistic, 1.0);
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
  // every sample beyond the support: D = 1
  std::vector<double> far(30, 5.0);
  EXPECT_DOUBLE_EQ(ks_test(far, [](double x) { return x < 1 ? 0.0 : 1.0; }).statistic, 1.0);
  // midpoints of n equal cells: D = 1 / (2n)
  std::vector<double> mid(40);
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = (i + 0.5) / 40.0;
  EXPECT_NEAR(ks_test(mid, uniform_cdf).statistic, 1.0 / 80.0, 1e-15);
  EXPECT_DOUBLE_EQ(ks_test(far, [](double) { return 0.0; }).statistic, 1.0);
}

TEST(Ks, TooFewSamplesRejected) {
  std::vector<double> s(kKsMinSamples - 1, 0.5);
  EXPECT_THROW(ks_test(s, uniform_cdf), ParameterError);
}

TEST(Ks, KolmogorovSurvivalKnownValues) {
  // Q(1.3581) ~ 0.05, Q(1.6276) ~ 0.01
  EXPECT_NEAR(kolmogorov_survival(1.3581), 0.05, 2e-4);
  EXPECT_NEAR(kolmogorov_survival(1.6276), 0.01, 1e-4);
  EXPECT_DOUBLE_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(TwoSampleKs, NullAndMismatch) {
  const auto a = uniforms(4000, 21);
  const auto b = uniforms(3000, 22);
  EXPECT_GT(two_sample_ks(a, b).p_value, 0.01);
  auto c = b;
  for (auto& x : c) x = x * x;
  const auto r = two_sample_ks(a, c);
  EXPECT_LT(r.p_value, 1e-6);
  EXPECT_GE(r.statistic, 0.0);
  EXPECT_LE(r.statistic, 1.0);
}

TEST(MeanCi, CoversTrueMeanAndShrinks) {
  Rng rng(31);
  std::vector<double> s(20000);
  for (auto& x : s) x = 2.0 + rng.normal();
  const auto ci = mean_ci(s);
  EXPECT_TRUE(ci.contains(2.0));
  EXPECT_NEAR(ci.std_error, 1.0 / std::sqrt(20000.0), 2e-4);
  EXPECT_NEAR(ci.halfwidth, 3.0 * ci.std_error, 1e-9);
  const auto ci95 = mean_ci(s, 0.95);
  EXPECT_NEAR(ci95.halfwidth, 1.959964 * ci.std_error, 1e-5);
  // gross mismatch
  EXPECT_FALSE(ci.contains(2.5));
}

TEST(NormalQuantile, KnownValues) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963985, 1e-8);
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-12);
}

TEST(Dispersion, PoissonNearOneAndOverdispersedFar) {
  Rng rng(41);
  std::vector<double> p(20000), g(20000);
  for (auto& x : p) x = static_cast<double>(rng.poisson(7.0));
  EXPECT_NEAR(poisson_dispersion(p), 1.0, 0.05);
  for (auto& x : g) x = static_cast<double>(rng.poisson(7.0 * rng.exponential()));
  EXPECT_GT(poisson_dispersion(g), 3.0);
  EXPECT_GE(poisson_dispersion(p), 0.0);
}

TEST(BinomialSe, Formula) { EXPECT_DOUBLE_EQ(binomial_se(0.25, 300), std::sqrt(0.25 * 0.75 / 300)); }

TEST(RankPlot, ParetoSlope) {
  Rng rng(51);
  std::vector<double> v(100000);
  // P[X > x] = x^{-1.5}
  for (auto& x : v) x = std::pow(rng.uniform_open(), -1.0 / 1.5);
  EXPECT_NEAR(rank_plot_slope(v, 2.0, 200.0), -1.5, 0.05);
}
