#include "levynet/stable_forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levynet/error.hpp"
#include "levynet/stable_levy.hpp"

namespace levynet::stable_forest {

OffspringLaw::OffspringLaw(double alpha) : alpha_(alpha) {
  stable_levy::check_alpha(alpha);
  zeta_alpha_ = std::riemann_zeta(alpha);
  zeta_alpha1_ = std::riemann_zeta(alpha + 1.0);
  p0_ = 1.0 - zeta_alpha1_ / zeta_alpha_;
  zipf_b_ = std::pow(2.0, alpha);
}

double OffspringLaw::pmf(std::uint64_t k) const {
  if (k == 0) return p0_;
  return std::pow(static_cast<double>(k), -1.0 - alpha_) / zeta_alpha_;
}

double OffspringLaw::branching_constant() const { return std::tgamma(-alpha_) / zeta_alpha_; }

std::uint64_t OffspringLaw::sample_zipf(Rng& rng) const {
  // Devroye's rejection sampler for P[X = k] proportional to k^{-s}, s = 1 + alpha.
  constexpr double cap = 0x1p62;
  for (;;) {
    const double u = rng.uniform_open();
    const double v = rng.uniform();
    const double x = std::floor(std::pow(u, -1.0 / alpha_));
    if (!(x < cap)) continue;
    const double t = std::pow(1.0 + 1.0 / x, alpha_);
    if (v * x * (t - 1.0) / (zipf_b_ - 1.0) <= t / zipf_b_) return static_cast<std::uint64_t>(x);
  }
}

std::uint64_t OffspringLaw::sample(Rng& rng) const {
  if (rng.uniform() < p0_) return 0;
  return sample_zipf(rng);
}

OffspringLaw offspring_law(double alpha) { return OffspringLaw(alpha); }

std::vector<std::int64_t> lukasiewicz_walk(std::span<const std::int64_t> offspring) {
  std::vector<std::int64_t> walk(offspring.size() + 1, 0);
  for (std::size_t k = 0; k < offspring.size(); ++k) {
    if (offspring[k] < 0) throw StructureError("negative offspring count");
    walk[k + 1] = walk[k] + offspring[k] - 1;
  }
  return walk;
}

std::vector<std::int64_t> height_process(std::span<const std::int64_t> walk) {
  if (walk.size() < 2) throw StructureError("walk must contain at least one step");
  if (walk[0] != 0) throw StructureError("walk must start at 0");
  std::int64_t running_min = 0;
  for (std::size_t k = 1; k < walk.size(); ++k) {
    if (walk[k] - walk[k - 1] < -1) throw StructureError("walk has a step below -1");
    if (k + 1 < walk.size()) running_min = std::min(running_min, walk[k]);
  }
  if (walk.back() != running_min - 1) throw StructureError("walk must end by reaching a new minimum");

  const std::size_t n = walk.size() - 1;
  std::vector<std::int64_t> heights(n);
  std::vector<std::size_t> stack;
  stack.reserve(64);
  for (std::size_t k = 0; k < n; ++k) {
    while (!stack.empty() && walk[stack.back()] > walk[k]) stack.pop_back();
    heights[k] = static_cast<std::int64_t>(stack.size());
    stack.push_back(k);
  }
  return heights;
}

std::vector<std::int64_t> level_profile(std::span<const std::int64_t> heights) {
  std::vector<std::int64_t> counts;
  for (std::int64_t h : heights) {
    if (h < 0) throw StructureError("negative height");
    const auto hh = static_cast<std::size_t>(h);
    if (hh >= counts.size()) counts.resize(hh + 1, 0);
    ++counts[hh];
  }
  return counts;
}

ForestProfile profile_from_offspring(double alpha, std::vector<std::int64_t> offspring_dfs) {
  if (offspring_dfs.empty()) throw StructureError("empty forest");
  ForestProfile p;
  p.alpha = alpha;
  p.walk = lukasiewicz_walk(offspring_dfs);
  p.offspring_counts = std::move(offspring_dfs);
  p.heights = height_process(p.walk);
  p.level_counts = level_profile(p.heights);
  p.roots = static_cast<std::size_t>(-p.walk.back());
  return p;
}

std::optional<ForestProfile> sample_forest(const OffspringLaw& law, std::size_t roots, std::size_t max_generation,
                                           Rng& rng, std::size_t max_vertices) {
  if (roots == 0) throw ParameterError("sample_forest: need at least one root");
  if (roots > max_vertices) return std::nullopt;
  // breadth-first offspring, generation after generation
  std::vector<std::int64_t> bfs;
  bfs.reserve(std::min<std::size_t>(max_vertices, 1u << 20));
  std::size_t gen_begin = 0;
  std::size_t gen_size = roots;
  std::size_t total = roots;
  bool cut = false;
  for (std::size_t g = 0; gen_size > 0; ++g) {
    std::size_t next = 0;
    for (std::size_t i = 0; i < gen_size; ++i) {
      std::uint64_t k = 0;
      if (g < max_generation) {
        k = law.sample(rng);
      } else {
        cut = true;
      }
      if (k > max_vertices || total + k > max_vertices) return std::nullopt;
      total += k;
      next += k;
      bfs.push_back(static_cast<std::int64_t>(k));
    }
    gen_begin += gen_size;
    gen_size = next;
  }
  (void)gen_begin;

  // depth-first order: children of BFS vertex v start at roots + prefix(v)
  const std::size_t n = bfs.size();
  std::vector<std::size_t> child_start(n);
  std::size_t acc = roots;
  for (std::size_t v = 0; v < n; ++v) {
    child_start[v] = acc;
    acc += static_cast<std::size_t>(bfs[v]);
  }
  std::vector<std::int64_t> dfs;
  dfs.reserve(n);
  std::vector<std::size_t> stack;
  for (std::size_t r = roots; r-- > 0;) stack.push_back(r);
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    dfs.push_back(bfs[v]);
    for (std::size_t c = static_cast<std::size_t>(bfs[v]); c-- > 0;) stack.push_back(child_start[v] + c);
  }
  ForestProfile p = profile_from_offspring(law.alpha(), std::move(dfs));
  if (cut) p.truncated_at = max_generation;
  return p;
}

ForestProfile sample_conditioned_tree(const OffspringLaw& law, std::size_t n, Rng& rng, double delta,
                                      std::size_t max_attempts) {
  if (n < 1) throw ParameterError("sample_conditioned_tree: n must be positive");
  if (!(delta >= 0.0)) throw ParameterError("sample_conditioned_tree: delta must be nonnegative");
  const auto upper = static_cast<std::size_t>(std::floor((1.0 + delta) * static_cast<double>(n)));
  const std::size_t unlimited = std::numeric_limits<std::size_t>::max() / 4;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    auto tree = sample_forest(law, 1, unlimited, rng, upper);
    if (tree && tree->size() >= n) return std::move(*tree);
  }
  throw BudgetExceededError("sample_conditioned_tree: attempt budget exceeded");
}

std::vector<std::int64_t> sample_generation_sizes(const OffspringLaw& law, std::int64_t roots,
                                                  std::size_t generations, Rng& rng) {
  if (roots < 0) throw ParameterError("sample_generation_sizes: negative root count");
  std::vector<std::int64_t> z;
  z.reserve(generations + 1);
  z.push_back(roots);
  for (std::size_t g = 0; g < generations; ++g) {
    std::int64_t next = 0;
    for (std::int64_t i = 0; i < z.back(); ++i) next += static_cast<std::int64_t>(law.sample(rng));
    z.push_back(next);
  }
  return z;
}

std::vector<double> attachment_positions(const ForestProfile& profile, std::size_t level,
                                         std::int64_t min_offspring) {
  if (level >= profile.level_counts.size() || profile.level_counts[level] == 0)
    throw RangeError("attachment_positions: empty level");
  const auto z = static_cast<double>(profile.level_counts[level]);
  std::vector<double> out;
  std::int64_t index = 0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    if (profile.heights[k] != static_cast<std::int64_t>(level)) continue;
    if (profile.offspring_counts[k] >= min_offspring) out.push_back((z - 1.0 - static_cast<double>(index)) / z);
    ++index;
  }
  return out;
}

CorrespondenceReport check_jump_correspondence(const ForestProfile& profile, std::int64_t min_offspring) {
  CorrespondenceReport rep;
  const std::size_t n = profile.size();
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::pair<std::size_t, std::int64_t>> stack;
  for (std::size_t k = 0; k < n; ++k) {
    if (!stack.empty()) {
      parent[k] = static_cast<std::int64_t>(stack.back().first);
      if (--stack.back().second == 0) stack.pop_back();
    }
    if (profile.offspring_counts[k] > 0) stack.emplace_back(k, profile.offspring_counts[k]);
    if (parent[k] >= 0 && profile.heights[k] != profile.heights[static_cast<std::size_t>(parent[k])] + 1)
      rep.ok = false;
  }
  std::vector<std::vector<std::size_t>> levels(profile.level_counts.size());
  for (std::size_t k = 0; k < n; ++k) levels[static_cast<std::size_t>(profile.heights[k])].push_back(k);
  for (std::size_t h = 0; h < levels.size(); ++h) {
    if (static_cast<std::int64_t>(levels[h].size()) != profile.level_counts[h]) rep.ok = false;
    const std::vector<std::size_t> empty;
    const auto& next = h + 1 < levels.size() ? levels[h + 1] : empty;
    std::size_t pos = 0;
    for (std::size_t v : levels[h]) {
      const std::int64_t kids = profile.offspring_counts[v];
      if (kids >= min_offspring) ++rep.big_vertices;
      for (std::int64_t c = 0; c < kids; ++c, ++pos)
        if (pos >= next.size() || parent[next[pos]] != static_cast<std::int64_t>(v)) rep.ok = false;
    }
    if (pos != next.size()) rep.ok = false;
  }
  return rep;
}

std::int64_t max_height(const ForestProfile& profile) {
  return static_cast<std::int64_t>(profile.level_counts.size()) - 1;
}

double generation_time(const OffspringLaw& law, double roots) {
  if (!(roots > 0.0)) throw ParameterError("generation_time: roots must be positive");
  return law.branching_constant() * std::pow(roots, 1.0 - law.alpha());
}

}  // namespace levynet::stable_forest
