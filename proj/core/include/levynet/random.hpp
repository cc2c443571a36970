#pragma once

#include <cstdint>
#include <random>

namespace levynet {

std::uint64_t splitmix64(std::uint64_t x);

// Seed for chunk `chunk` of stream `stream` under root seed `root`.
// seed = splitmix64(splitmix64(root ^ splitmix64(stream)) + chunk)
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t chunk = 0);

class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_stream(std::uint64_t root, std::uint64_t stream, std::uint64_t chunk = 0) {
    return Rng(derive_seed(root, stream, chunk));
  }

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // (0, 1)
  double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() { return normal_(engine_); }
  double exponential();
  std::uint64_t poisson(double mean);
  std::uint64_t binomial(std::uint64_t trials, double p);
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t below(std::uint64_t n);

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace levynet
