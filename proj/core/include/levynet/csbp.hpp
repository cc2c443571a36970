#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "levynet/random.hpp"
#include "levynet/stable_levy.hpp"

namespace levynet::csbp {

using stable_levy::StablePath;

// CSBP with branching mechanism psi(u) = u^alpha.
struct CsbpPath {
  double alpha = 1.5;
  std::vector<double> times;
  std::vector<double> values;
  std::optional<double> absorption_time;
  std::shared_ptr<const StablePath> source;

  // Piecewise-constant value at CSBP time s.
  double value_at(double s) const;
};

// Levy prefactor c with c * Gamma(-alpha) = 1, so that the Laplace exponent
// of the driving process is exactly u^alpha.
double branching_levy_scale(double alpha);

// u_t(lambda) = (lambda^{1-alpha} + (alpha-1) t)^{1/(1-alpha)}
double u_lambda(double alpha, double lambda, double t);
double laplace(double alpha, double y0, double lambda, double t);
// u_t(infinity) = ((alpha-1) t)^{1/(1-alpha)}
double u_infinity(double alpha, double t);
// P[zeta > t] = 1 - exp(-y0 * u_t(infinity))
double extinction_tail(double alpha, double y0, double t);
double extinction_cdf(double alpha, double y0, double t);
// Exact draw by inversion of the extinction law.
double sample_extinction_time(double alpha, double y0, Rng& rng);

// Discrete Lamperti time change. With output_dt == 0 the output grid is the
// natural image of the Levy grid; otherwise a uniform CSBP-time grid.
CsbpPath lamperti(const StablePath& levy, double output_dt = 0.0);
CsbpPath lamperti(std::shared_ptr<const StablePath> levy, double output_dt = 0.0);

// Levy path on the state-proportional grid dt_k = h * X_k with exact stable
// increments (Levy scale branching_levy_scale). Every step is h units of
// CSBP time. Stops at the first nonpositive value or after horizon / h steps.
StablePath sample_lamperti_driver(double alpha, double y0, double h, double horizon, Rng& rng);

// Below this level the stepped scheme records extinction too early (the
// relative size of one increment grows like x^{1/alpha - 1}).
inline constexpr double kExtinctionFloor = 0.05;

// Streaming form of lamperti(sample_lamperti_driver(...)) for ensembles:
// the same draws in the same order, without storing the path.
class Simulator {
 public:
  Simulator(double alpha, double h);
  double alpha() const { return alpha_; }
  double h() const { return h_; }

  struct Result {
    std::vector<double> values;
    double absorption_time = std::numeric_limits<double>::infinity();
    bool absorbed() const { return std::isfinite(absorption_time); }
  };

  // Values at the sorted, nonnegative CSBP times `at`. The run continues to
  // max(at, horizon) or absorption.
  Result run(double y0, const std::vector<double>& at, Rng& rng, double horizon = 0.0) const;
  struct Sup {
    double sup = 0.0;
    double absorption_time = std::numeric_limits<double>::infinity();
  };
  // Running maximum over [0, horizon] (stopped at absorption).
  Sup run_sup(double y0, double horizon, Rng& rng) const;

  // Absorption time if it happens before horizon, else +inf. Once the value
  // drops below `floor` the remaining time is drawn from the exact extinction
  // law (strong Markov property); floor = 0 runs the plain scheme to the end.
  double absorption_before(double y0, double horizon, Rng& rng, double floor = kExtinctionFloor) const;

 private:
  double alpha_;
  double h_;
  stable_levy::IncrementSampler inc_;
};

inline constexpr double kDefaultStep = 1e-3;

CsbpPath simulate(double alpha, double y0, double horizon, double h, Rng& rng);

struct RatioEstimate {
  double mean = 0.0;
  double halfwidth = 0.0;
  double std_error = 0.0;
  std::size_t used = 0;
  std::size_t discarded = 0;
  double discard_rate = 0.0;
};

// Mean of A/(A+B) for independent CSBPs from a and b observed at time t,
// over pairs with A + B > 0; CI at z = 3.
RatioEstimate subordinator_ratio_estimate(double alpha, double a, double b, double t, std::size_t n, Rng& rng,
                                          double h = kDefaultStep);

// Ratio samples split into fixed chunks with derived streams.
RatioEstimate subordinator_ratio_estimate(double alpha, double a, double b, double t, std::size_t n,
                                          std::uint64_t root, std::uint64_t stream, unsigned jobs,
                                          double h = kDefaultStep);

}  // namespace levynet::csbp
