#include "levynet/levy_net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levynet/error.hpp"

namespace levynet::levy_net {

double LevyNetSkeleton::sum_squared_jumps() const {
  double s = 0.0;
  for (const auto& j : jumps) s += j.size * j.size;
  return s;
}

LevyNetSkeleton skeleton_from_profile(const stable_forest::ForestProfile& profile, std::int64_t min_offspring) {
  if (profile.size() == 0 || profile.level_counts.empty()) throw StructureError("skeleton_from_profile: empty forest");
  if (min_offspring < 2) throw ParameterError("skeleton_from_profile: min_offspring must be at least 2");
  const double n = static_cast<double>(profile.size());
  const double length_scale = std::pow(n, 1.0 / profile.alpha);
  const double depth_scale = std::pow(n, 1.0 - 1.0 / profile.alpha);

  LevyNetSkeleton sk;
  sk.alpha = profile.alpha;
  const std::size_t levels = profile.level_counts.size();
  for (std::size_t h = 0; h < levels; ++h) {
    sk.z_times.push_back(static_cast<double>(h) / depth_scale);
    sk.z_values.push_back(static_cast<double>(profile.level_counts[h]) / length_scale);
  }
  sk.total_depth = static_cast<double>(levels) / depth_scale;
  sk.z_times.push_back(sk.total_depth);
  sk.z_values.push_back(0.0);

  std::vector<std::int64_t> seen(levels, 0);
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const auto h = static_cast<std::size_t>(profile.heights[k]);
    const std::int64_t index = seen[h]++;
    const std::int64_t kids = profile.offspring_counts[k];
    if (kids < min_offspring) continue;
    const std::int64_t right = profile.level_counts[h] - 1 - index;
    sk.jumps.push_back({static_cast<double>(h + 1) / depth_scale, static_cast<double>(kids - 1) / length_scale,
                        static_cast<double>(right) / length_scale});
  }
  std::stable_sort(sk.jumps.begin(), sk.jumps.end(),
                   [](const SkeletonJump& x, const SkeletonJump& y) { return x.time < y.time; });
  return sk;
}

GeodesicPair geodesic_pair(double alpha, double a0, double b0, const Grid& grid, Rng& rng) {
  if (!(a0 > 0.0) || !(b0 > 0.0)) throw ParameterError("geodesic_pair: a0 and b0 must be positive");
  if (!(grid.h > 0.0) || !(grid.horizon > 0.0)) throw ParameterError("geodesic_pair: bad grid");
  GeodesicPair pair;
  pair.a_path = csbp::lamperti(
      std::make_shared<const csbp::StablePath>(csbp::sample_lamperti_driver(alpha, a0, grid.h, grid.horizon, rng)),
      grid.h);
  pair.b_path = csbp::lamperti(
      std::make_shared<const csbp::StablePath>(csbp::sample_lamperti_driver(alpha, b0, grid.h, grid.horizon, rng)),
      grid.h);
  const double inf = std::numeric_limits<double>::infinity();
  const double za = pair.a_path.absorption_time.value_or(inf);
  const double zb = pair.b_path.absorption_time.value_or(inf);
  const double first = std::min(za, zb);
  if (first <= grid.horizon) {
    pair.merge_time = first;
    pair.merge_side = za <= zb ? MergeSide::a : MergeSide::b;
  }
  return pair;
}

std::vector<double> ratio_process(const GeodesicPair& pair, const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double s : times) {
    if (pair.merge_time && s >= *pair.merge_time) {
      out.push_back(pair.merge_side == MergeSide::a ? 0.0 : 1.0);
      continue;
    }
    const double a = pair.a_path.value_at(s);
    const double b = pair.b_path.value_at(s);
    out.push_back(a / (a + b));
  }
  return out;
}

double mean_block_length(double alpha, double eps) {
  stable_levy::check_alpha(alpha);
  if (!(eps > 0.0)) throw ParameterError("mean_block_length: eps must be positive");
  return std::pow((alpha - 1.0) * eps, 1.0 / (alpha - 1.0));
}

CoalescenceCount coalescence_count(double alpha, double boundary_length, double eps, Rng& rng,
                                   double delta_fraction) {
  if (!(boundary_length > 0.0)) throw ParameterError("coalescence_count: L must be positive");
  if (!(delta_fraction > 0.0)) throw ParameterError("coalescence_count: delta_fraction must be positive");
  const double m = mean_block_length(alpha, eps);
  CoalescenceCount out;
  out.delta = delta_fraction * m;
  out.coarse_delta_warning = out.delta > m / 10.0;
  out.blocks = static_cast<std::int64_t>(std::floor(boundary_length / out.delta));
  for (std::int64_t i = 0; i < out.blocks; ++i)
    if (csbp::sample_extinction_time(alpha, out.delta, rng) > eps) ++out.count;
  return out;
}

double slice_floor(double beta, double expected_points) {
  if (!(beta > 0.0)) throw ParameterError("slice: beta must be positive");
  if (!(expected_points > 0.0)) throw ParameterError("slice: expected_points must be positive");
  return std::pow(expected_points / beta, -beta);
}

SlicePpp sample_slice_ppp(double beta, Rng& rng, double expected_points) {
  SlicePpp ppp;
  ppp.beta = beta;
  ppp.floor = slice_floor(beta, expected_points);
  // mass above x is beta x^{-1/beta}; unit-rate arrivals Gamma_i give x_i = (Gamma_i / beta)^{-beta}
  double gamma = 0.0;
  for (;;) {
    gamma += rng.exponential();
    const double x = std::pow(gamma / beta, -beta);
    if (x < ppp.floor) break;
    ppp.marks.push_back(x);
    ppp.positions.push_back(rng.uniform());
  }
  return ppp;
}

double sample_slice_max(double beta, Rng& rng) {
  if (!(beta > 0.0)) throw ParameterError("slice: beta must be positive");
  return std::pow(rng.exponential() / beta, -beta);
}

double frechet_cdf(double beta, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp(-beta * std::pow(x, -1.0 / beta));
}

double slice_merge_depth(double a, double b, const SlicePpp& ppp) {
  if (!(a >= 0.0 && b <= 1.0)) throw RangeError("slice_merge_depth: interval must lie in [0,1]");
  if (a > b) throw RangeError("slice_merge_depth: need a <= b");
  if (a == b) return 0.0;
  for (std::size_t i = 0; i < ppp.marks.size(); ++i)
    if (ppp.positions[i] > a && ppp.positions[i] < b) return ppp.marks[i];
  return 0.0;
}

double bridge_scale(double alpha, double ell) {
  stable_levy::check_alpha(alpha);
  const double beta = alpha - 1.0;
  return ell * std::pow(beta, -1.0 - 1.0 / beta);
}

double reflected_csbp_sup(double alpha, double eps, double horizon, Rng& rng, double h) {
  if (!(eps > 0.0) || !(horizon > 0.0)) throw ParameterError("reflected_csbp_sup: eps and horizon must be positive");
  csbp::Simulator sim(alpha, h);
  double elapsed = 0.0;
  double sup = eps;
  while (elapsed < horizon) {
    const auto run = sim.run_sup(eps, horizon - elapsed, rng);
    sup = std::max(sup, run.sup);
    if (!std::isfinite(run.absorption_time)) break;
    elapsed += run.absorption_time;
  }
  return sup;
}

}  // namespace levynet::levy_net
