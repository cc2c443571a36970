#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace levynet::harness {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

struct MeanCi {
  double mean = 0.0;
  double halfwidth = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;

  bool contains(double v) const { return v >= mean - halfwidth && v <= mean + halfwidth; }
};

inline constexpr std::size_t kKsMinSamples = 20;
inline constexpr double kThreeSigmaLevel = 0.99730020393673979;

// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
double kolmogorov_survival(double lambda);

KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);
KsResult two_sample_ks(std::span<const double> a, std::span<const double> b);

MeanCi mean_ci(std::span<const double> samples, double level = kThreeSigmaLevel);
double normal_quantile(double p);

// variance / mean, sample variance with n-1
double poisson_dispersion(std::span<const double> counts);

double binomial_se(double p, std::size_t n);

// Least-squares slope of log(rank) against log(value) over values in [lo, hi],
// ranks counted from the largest value down.
double rank_plot_slope(std::span<const double> values, double lo, double hi);

}  // namespace levynet::harness
