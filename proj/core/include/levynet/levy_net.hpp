#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "levynet/csbp.hpp"
#include "levynet/random.hpp"
#include "levynet/stable_forest.hpp"

namespace levynet::levy_net {

struct SkeletonJump {
  double time = 0.0;
  double size = 0.0;
  double attachment = 0.0;
};

struct LevyNetSkeleton {
  double alpha = 1.5;
  std::vector<double> z_times;
  std::vector<double> z_values;
  std::vector<SkeletonJump> jumps;
  double total_depth = 0.0;

  double sum_squared_jumps() const;
};

// Level counts rescaled by n^{1/alpha}, depth by n^{1-1/alpha}. Every vertex
// with at least min_offspring >= 2 children is a jump of size
// (children - 1) / n^{1/alpha} at the next generation, attached at its
// measured right-count position.
LevyNetSkeleton skeleton_from_profile(const stable_forest::ForestProfile& profile, std::int64_t min_offspring = 2);

enum class MergeSide { none, a, b };

struct GeodesicPair {
  csbp::CsbpPath a_path;
  csbp::CsbpPath b_path;
  std::optional<double> merge_time;
  MergeSide merge_side = MergeSide::none;
};

struct Grid {
  double h = csbp::kDefaultStep;
  double horizon = 1.0;
};

GeodesicPair geodesic_pair(double alpha, double a0, double b0, const Grid& grid, Rng& rng);

// A/(A+B) at the given times; 0 or 1 after the first extinction.
std::vector<double> ratio_process(const GeodesicPair& pair, const std::vector<double>& times);

// m_eps = ((alpha-1) eps)^{1/(alpha-1)}
double mean_block_length(double alpha, double eps);

struct CoalescenceCount {
  std::int64_t count = 0;
  double delta = 0.0;
  std::int64_t blocks = 0;
  bool coarse_delta_warning = false;
};

// Boundary length L cut into blocks of size delta = delta_fraction * m_eps;
// each block's CSBP is run to extinction (exact law) and the blocks that
// survive time eps are counted.
CoalescenceCount coalescence_count(double alpha, double boundary_length, double eps, Rng& rng,
                                   double delta_fraction = 0.01);

// Poisson point process on [0,1] x (floor, inf) with intensity
// ds (x) x^{-1/beta - 1} dx, marks in decreasing order.
struct SlicePpp {
  double beta = 0.5;
  double floor = 0.0;
  std::vector<double> positions;
  std::vector<double> marks;
};

double slice_floor(double beta, double expected_points);
SlicePpp sample_slice_ppp(double beta, Rng& rng, double expected_points = 1024.0);
// Largest mark only; same law as the first point of sample_slice_ppp.
double sample_slice_max(double beta, Rng& rng);
double frechet_cdf(double beta, double x);

// Largest mark with position in (a, b); 0 if none above the floor.
double slice_merge_depth(double a, double b, const SlicePpp& ppp);

// Fréchet scale matching the extinction law of a CSBP started from ell with
// beta = alpha - 1: ell-CSBP extinction time ~ scale^beta * d(0,1).
double bridge_scale(double alpha, double ell);

// Sup over [0, horizon] of the CSBP restarted at eps whenever it hits 0.
double reflected_csbp_sup(double alpha, double eps, double horizon, Rng& rng, double h = csbp::kDefaultStep);

}  // namespace levynet::levy_net
