#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "levynet/random.hpp"

namespace levynet::brownian_map {

enum class Variant { lattice, gaussian };

// Tour (lifetime) y and head x on grid points 0..n; y[0] = y[n] = 0.
// Gaussian head positions are multiples of 2^-32, so every d-circ value and
// min-plus sum below is exact in double precision.
struct SnakeSample {
  std::size_t n = 0;
  std::vector<double> y;
  std::vector<double> x;
  Variant variant = Variant::lattice;
  std::size_t root_index = 0;
};

inline constexpr double kHeadQuantum = 0x1p-32;
double quantize_head(double v);

// Standard Brownian excursion on n+1 grid points (bridge plus cyclic shift
// at the argmin).
std::vector<double> sample_excursion(std::size_t n, Rng& rng);

// Uniform Dyck path of length `steps` (even) with fair-coin left/right head
// moves on up-steps and retracing on down-steps.
SnakeSample sample_discrete_snake(std::size_t steps, Rng& rng);

// Brownian excursion lifetime with a Gaussian head: Cov(x_s, x_t) = min y on [s, t].
SnakeSample sample_gaussian_snake(std::size_t n_grid, Rng& rng);

// Dense row-major square matrix.
struct SquareMatrix {
  std::size_t m = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size, double fill = 0.0) : m(size), data(size * size, fill) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * m + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * m + j]; }
  bool operator==(const SquareMatrix&) const = default;
};

// d(s,t) = x_s + x_t - 2 max(min x on [s,t], min x on the cyclic complement)
double d_circ(const std::vector<double>& x, std::size_t s, std::size_t t);
double d_circ(const SnakeSample& sample, std::size_t s, std::size_t t);

SquareMatrix d_circ_matrix(const SnakeSample& sample, const std::vector<std::size_t>& points);

// Min-plus transitive closure (Floyd-Warshall). Throws StructureError for
// non-square input. Rows are relaxed in parallel for jobs > 1; the result
// does not depend on jobs.
SquareMatrix metric_closure(const SquareMatrix& d, unsigned jobs = 1);
SquareMatrix metric_closure(const std::vector<std::vector<double>>& d, unsigned jobs = 1);

struct MetricMatrix {
  std::vector<std::size_t> point_times;
  SquareMatrix d_circ;
  SquareMatrix d;
};

// m distinct uniform tour indices including root_index, sorted.
std::vector<std::size_t> select_points(const SnakeSample& sample, std::size_t m, Rng& rng);
MetricMatrix compute_metric(const SnakeSample& sample, const std::vector<std::size_t>& points, unsigned jobs = 1);

struct MetricCheck {
  bool symmetric = true;
  bool zero_diagonal = true;
  bool triangle = true;
  bool below_d_circ = true;
  bool d_circ_above_gap = true;
  bool root_distance = true;
  bool all() const {
    return symmetric && zero_diagonal && triangle && below_d_circ && d_circ_above_gap && root_distance;
  }
};

// Exact checks; point_times must contain root_index.
MetricCheck check_metric(const SnakeSample& sample, const MetricMatrix& metric);

// d(i,j) == 0 exactly when i and j are joined by a chain of zero d-circ entries.
bool zero_distance_consistent(const MetricMatrix& metric);

// Exit points below level a (a < 0): tree vertices with head <= a whose
// strict ancestors all have head > a. Counts those whose subtree reaches
// lifetime height >= eps above them, times eps. eps = 0 returns the plain
// exit-point count.
double hull_boundary_length(const SnakeSample& sample, double a, double eps);
std::size_t exit_point_count(const SnakeSample& sample, double a, double min_height);

// Length of a simple-random-walk lifetime started at height 1 and stopped at
// 0, capped at max_steps (returns max_steps if the cap is hit).
std::uint64_t sample_lifetime_length(Rng& rng, std::uint64_t max_steps);

// Var(e_{1/2}) for the standard Brownian excursion: 3/4 - 2/pi.
double excursion_midpoint_variance();

}  // namespace levynet::brownian_map
