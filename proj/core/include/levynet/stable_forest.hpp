#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "levynet/random.hpp"

namespace levynet::stable_forest {

// p_k = k^{-1-alpha} / zeta(alpha) for k >= 1, p_0 = 1 - zeta(1+alpha)/zeta(alpha).
// The mean is sum_k k p_k = zeta(alpha)/zeta(alpha) = 1.
class OffspringLaw {
 public:
  explicit OffspringLaw(double alpha);

  double alpha() const { return alpha_; }
  double p0() const { return p0_; }
  double pmf(std::uint64_t k) const;
  bool infinite_variance() const { return true; }
  // Tail P[xi >= k] ~ tail_constant() * k^{-alpha}
  double tail_constant() const { return 1.0 / (alpha_ * zeta_alpha_); }
  // Branching constant: f(1-u) - (1-u) ~ branching_constant() * u^alpha
  double branching_constant() const;
  std::uint64_t sample(Rng& rng) const;

 private:
  std::uint64_t sample_zipf(Rng& rng) const;

  double alpha_;
  double zeta_alpha_;
  double zeta_alpha1_;
  double p0_;
  double zipf_b_;
};

OffspringLaw offspring_law(double alpha);

struct ForestProfile {
  double alpha = 1.5;
  std::size_t roots = 1;
  std::vector<std::int64_t> offspring_counts;
  std::vector<std::int64_t> walk;
  std::vector<std::int64_t> heights;
  std::vector<std::int64_t> level_counts;
  // Generation at which offspring were forced to 0, if the forest was cut.
  std::optional<std::size_t> truncated_at;

  std::size_t size() const { return offspring_counts.size(); }
};

// walk[0] = 0, walk[k+1] = walk[k] + offspring[k] - 1
std::vector<std::int64_t> lukasiewicz_walk(std::span<const std::int64_t> offspring);

// heights[k] = #{ j < k : walk[j] = min(walk[j..k]) }, amortized O(n).
// The walk includes its terminal value; the result has walk.size() - 1 entries.
std::vector<std::int64_t> height_process(std::span<const std::int64_t> walk);

std::vector<std::int64_t> level_profile(std::span<const std::int64_t> heights);

ForestProfile profile_from_offspring(double alpha, std::vector<std::int64_t> offspring_dfs);

// Breadth-first forest with `roots` roots. Vertices at generation
// max_generation get no children. Returns nullopt once the vertex count would
// exceed max_vertices.
std::optional<ForestProfile> sample_forest(const OffspringLaw& law, std::size_t roots, std::size_t max_generation,
                                           Rng& rng, std::size_t max_vertices);

// Single tree conditioned on size in [n, (1 + delta) n], by rejection.
ForestProfile sample_conditioned_tree(const OffspringLaw& law, std::size_t n, Rng& rng, double delta = 0.1,
                                      std::size_t max_attempts = 50'000'000);

// Z_0 = roots, Z_{g+1} = sum of offspring of generation g, for g < generations.
std::vector<std::int64_t> sample_generation_sizes(const OffspringLaw& law, std::int64_t roots,
                                                  std::size_t generations, Rng& rng);

// Normalized count of level vertices strictly to the right (depth-first order)
// of each vertex at `level` with at least min_offspring children.
std::vector<double> attachment_positions(const ForestProfile& profile, std::size_t level,
                                         std::int64_t min_offspring);

struct CorrespondenceReport {
  bool ok = true;
  std::size_t big_vertices = 0;
};

// Children of each vertex form one contiguous block in the next generation,
// ordered as their parents, of length equal to the offspring count.
CorrespondenceReport check_jump_correspondence(const ForestProfile& profile, std::int64_t min_offspring);

std::int64_t max_height(const ForestProfile& profile);

// CSBP time of one generation for a forest started from `roots` vertices,
// rescaled by `roots`: branching_constant * roots^{1-alpha}.
double generation_time(const OffspringLaw& law, double roots);

}  // namespace levynet::stable_forest
