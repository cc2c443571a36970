#include "levynet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>

#include "levynet/error.hpp"

namespace levynet::harness {

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 0.5) {
    // Jacobi-transformed series, converges fast for small lambda
    const double pi = std::numbers::pi;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      s += std::exp(-m * m * pi * pi / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double stephens_p(double d, double n_eff) {
  const double sq = std::sqrt(n_eff);
  return kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
}

}  // namespace

KsResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  const std::size_t n = samples.size();
  if (n < kKsMinSamples) throw ParameterError("ks_test needs at least 20 samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  double d = 0.0;
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(x[i]);
    if (!std::isfinite(f)) throw NumericError("cdf returned a non-finite value");
    d = std::max({d, static_cast<double>(i + 1) / nn - f, f - static_cast<double>(i) / nn});
  }
  d = std::clamp(d, 0.0, 1.0);
  return {d, stephens_p(d, nn), n};
}

KsResult two_sample_ks(std::span<const double> a, std::span<const double> b) {
  if (a.size() < kKsMinSamples || b.size() < kKsMinSamples)
    throw ParameterError("two_sample_ks needs at least 20 samples per side");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  const double n_eff = n * m / (n + m);
  return {d, stephens_p(d, n_eff), x.size() + y.size()};
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("normal_quantile needs p in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

MeanCi mean_ci(std::span<const double> samples, double level) {
  const std::size_t n = samples.size();
  if (n < 2) throw ParameterError("mean_ci needs at least 2 samples");
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("mean_ci level must be in (0,1)");
  // two-pass for accuracy
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  const double se = std::sqrt(var / static_cast<double>(n));
  const double z = normal_quantile(0.5 + level / 2.0);
  return {mean, z * se, se, n};
}

double poisson_dispersion(std::span<const double> counts) {
  if (counts.size() < 2) throw ParameterError("poisson_dispersion needs at least 2 samples");
  double sum = 0.0;
  for (double v : counts) sum += v;
  const double mean = sum / static_cast<double>(counts.size());
  if (mean <= 0.0) throw DegenerateSampleError("poisson_dispersion: zero mean");
  double ss = 0.0;
  for (double v : counts) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(counts.size() - 1) / mean;
}

double binomial_se(double p, std::size_t n) {
  if (n == 0) throw ParameterError("binomial_se needs n > 0");
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

double rank_plot_slope(std::span<const double> values, double lo, double hi) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < lo || v[i] > hi || !(v[i] > 0.0)) continue;
    const double lx = std::log(v[i]);
    const double ly = std::log(static_cast<double>(i + 1));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m < 3) throw DegenerateSampleError("rank_plot_slope: fewer than 3 points in range");
  const double mm = static_cast<double>(m);
  const double den = sxx - sx * sx / mm;
  if (!(den > 0.0)) throw DegenerateSampleError("rank_plot_slope: no spread in range");
  return (sxy - sx * sy / mm) / den;
}

}  // namespace levynet::harness
