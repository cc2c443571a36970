#include "levynet/random.hpp"

#include <cmath>

#include "levynet/error.hpp"

namespace levynet {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t chunk) {
  return splitmix64(splitmix64(root ^ splitmix64(stream)) + chunk);
}

double Rng::exponential() { return -std::log(uniform_open()); }

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw ParameterError("poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // inversion by sequential search
    double p = std::exp(-mean);
    double cdf = p;
    const double u = uniform();
    std::uint64_t k = 0;
    while (u > cdf && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(engine_);
}

std::uint64_t Rng::binomial(std::uint64_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binomial p must lie in [0,1]");
  std::binomial_distribution<std::uint64_t> dist(trials, p);
  return dist(engine_);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ParameterError("below(0)");
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

}  // namespace levynet
