#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "levynet/error.hpp"
#include "levynet/random.hpp"

namespace levynet::stable_levy {

enum class SmallJumps { drop, matched_gaussian };
enum class Increments { compound_poisson, exact_marginal };
enum class ExitSide { none, lower, upper };

struct Jump {
  double time = 0.0;
  double size = 0.0;
  bool operator==(const Jump&) const = default;
};

// Spectrally positive alpha-stable path on a grid. Levy density is
// levy_scale * x^{-alpha-1} on (0, inf).
struct StablePath {
  double alpha = 1.5;
  double levy_scale = 1.0;
  double truncation = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<Jump> jumps;
  ExitSide exit = ExitSide::none;

  double duration() const { return times.empty() ? 0.0 : times.back(); }
  bool operator==(const StablePath&) const = default;
};

struct PathScheme {
  double grid_dt = 1e-3;
  // 0 selects truncation_factor * (levy_scale * grid_dt)^{1/alpha}
  double truncation = 0.0;
  double truncation_factor = 0.25;
  SmallJumps small_jumps = SmallJumps::matched_gaussian;
  Increments increments = Increments::compound_poisson;
  double levy_scale = 1.0;
  std::size_t max_steps = 20'000'000;
};

class ExcursionBudgetExceeded : public BudgetExceededError {
 public:
  ExcursionBudgetExceeded(const std::string& what, StablePath partial)
      : BudgetExceededError(what), partial_(std::move(partial)) {}
  const StablePath& partial() const { return partial_; }

 private:
  StablePath partial_;
};

void check_alpha(double alpha);

// Path times live on the dyadic lattice 2^-40 so that reflection
// t -> T - t is exact in double precision.
inline double quantize_time(double t) { return std::floor(t * 0x1p40) * 0x1p-40; }

// Scale sigma of the time-1 marginal S_alpha(sigma, 1, 0):
// sigma^alpha = -levy_scale * Gamma(-alpha) * cos(pi alpha / 2).
double stable_sigma(double alpha, double levy_scale = 1.0);

// Chambers-Mallows-Stuck, skewness +1, with the constants cached.
class IncrementSampler {
 public:
  explicit IncrementSampler(double alpha, double levy_scale = 1.0);
  double alpha() const { return alpha_; }
  // Draw at time 1.
  double unit(Rng& rng) const;
  double operator()(double dt, Rng& rng) const { return std::pow(dt, inv_alpha_) * unit(rng); }

 private:
  double alpha_;
  double inv_alpha_;
  double b_;
  double s_;
  double sigma_;
};

double sample_stable_increment(double alpha, double dt, Rng& rng, double levy_scale = 1.0);

double default_truncation(double alpha, double dt, double levy_scale = 1.0, double factor = 0.25);

// Rates for the truncated decomposition at level eps.
double jump_rate_above(double alpha, double eps, double levy_scale = 1.0);
double compensator_rate(double alpha, double eps, double levy_scale = 1.0);
double small_jump_variance_rate(double alpha, double eps, double levy_scale = 1.0);

// One grid step of the path scheme.
class Stepper {
 public:
  Stepper(double alpha, const PathScheme& scheme);
  double truncation() const { return eps_; }
  // Returns the increment over [t0, t0 + dt); appends jumps in time order.
  double step(double t0, double dt, Rng& rng, std::vector<Jump>* jumps);

 private:
  double alpha_;
  PathScheme scheme_;
  double eps_;
  double rate_;
  double drift_;
  double small_var_;
  IncrementSampler marginal_;
};

StablePath sample_path(double alpha, double x0, double duration, const PathScheme& scheme, Rng& rng);

// Start at eps_start, stop at the first grid time with value <= 0 or >= stop_cap.
StablePath sample_excursion_approx(double alpha, double eps_start, double stop_cap, double grid_dt, Rng& rng,
                                   PathScheme scheme = {});

// P[reach stop_cap before 0 | start eps] = 1 - (1 - eps/cap)^{alpha-1}
double exit_upper_probability(double alpha, double eps, double stop_cap);

StablePath reverse_path(const StablePath& path);

std::vector<Jump> extract_jumps(const StablePath& path, double threshold);

struct JumpLevel {
  double time = 0.0;
  double size = 0.0;
  double before = 0.0;
  double after = 0.0;
};

// Level just before and after each recorded jump. The continuous part of a
// grid step is interpolated linearly in time.
std::vector<JumpLevel> jump_levels(const StablePath& path);

// Structural checks; throws StructureError.
void validate(const StablePath& path);

}  // namespace levynet::stable_levy
