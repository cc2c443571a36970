#pragma once

#include <cstddef>
#include <cstdint>

#include "levynet/random.hpp"

namespace levynet::characterization {

enum class JumpKind { reversal, center, weighted };

struct JumpLawSpec {
  double alpha = 1.5;
  JumpKind kind = JumpKind::reversal;
  double c = 1.0;

  // (0, c) for reversal jumps, (0, c/2] otherwise
  double support_upper() const;
  // Unnormalized density at jump size a.
  double density(double a) const;
};

// a^{-alpha-1} (1 - a/c)^{alpha-2}, 0 < a < c
double reversal_jump_density(double alpha, double a, double c);
// a^{-alpha-1} (b/c)^{-alpha-1}, b = c - a, 0 < a <= c/2
double center_jump_density(double alpha, double a, double c);
// (a/c)^{2 alpha - 1} + (b/c)^{2 alpha - 1}
double area_weight(double alpha, double a, double c);
// |L-fold - weight * center| / |weight * center|
double fold_identity_residual(double alpha, double a, double c);
// A jump from c down to `lower` is big iff lower < c/2.
bool is_big_jump(double c, double lower);

// Law of u = a/c for reversal jumps restricted to u in [u_min, 1).
class ReversalRatioLaw {
 public:
  ReversalRatioLaw(double alpha, double u_min);
  double cdf(double u) const;

 private:
  double tail(double u) const;
  double alpha_;
  double u_min_;
  double total_;
};

// Gauss series for 2F1(a, b; c; x), |x| < 1, stopping when the term ratio
// drops below 1e-16 relative to the sum.
double hyp2f1_series(double a, double b, double c, double x);
// B_x(a, b) = x^a / a * 2F1(a, 1 - b; a + 1; x), continued to a < 0.
double incomplete_beta(double x, double a, double b);

double i_alpha_closed(double alpha);
double i_alpha_four_term(double alpha);
// Regularized integrand on (0, 1/2]; finite for x > 0.
double i_alpha_integrand(double alpha, double x);
double i_alpha_quadrature(double alpha);

enum class IMethod { closed, quadrature };
double find_martingale_alpha(double tol, IMethod method = IMethod::closed, double lo = 1.1, double hi = 1.9);

enum class SmallJumpScheme { drop, matched_gaussian };

struct DriftParams {
  double alpha = 1.5;
  double r = 1e-2;
  double eps = 1e-3;
  std::size_t n = 1'000'000;
  SmallJumpScheme scheme = SmallJumpScheme::matched_gaussian;
  std::size_t max_events = 10'000;
  // CI halfwidth in standard errors
  double z = 3.0;
};

struct DriftEstimate {
  double alpha = 0.0;
  double r = 0.0;
  double eps = 0.0;
  std::size_t n = 0;
  double mean = 0.0;
  double halfwidth = 0.0;
  double std_error = 0.0;
  double reference = 0.0;
  bool contains(double v) const { return v >= mean - halfwidth && v <= mean + halfwidth; }
};

// Moments of the marks below eps for the jump density
// Pi(x) = x^{-alpha-1} (1-x)^{-alpha-1}.
struct SmallJumpMoments {
  double mean_shift = 0.0;   // int_0^eps x^{-alpha} (1 - (1-x)^{-alpha-1}) dx
  double variance = 0.0;     // int_0^eps x^{1-alpha} (1-x)^{-alpha-1} dx
  double power_mean = 0.0;   // int_0^eps x^{alpha-2} (1-x)^{-alpha-1} dx
};
SmallJumpMoments small_jump_moments(double alpha, double eps);

// Total mass of Pi on [eps, 1/2].
double jump_mass(double alpha, double eps);

// Monte Carlo mean of (A_r - 1) / r with the jump intensity frozen at state 1.
DriftEstimate drift_estimate(const DriftParams& params, std::uint64_t root_seed, std::uint64_t stream,
                             unsigned jobs = 1);
DriftEstimate drift_estimate(const DriftParams& params, Rng& rng);

}  // namespace levynet::characterization
