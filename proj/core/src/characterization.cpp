#include "levynet/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levynet/error.hpp"
#include "levynet/parallel.hpp"
#include "levynet/stable_levy.hpp"

namespace levynet::characterization {

using stable_levy::check_alpha;

double reversal_jump_density(double alpha, double a, double c) {
  check_alpha(alpha);
  if (!(a > 0.0 && a < c)) throw RangeError("reversal_jump_density: need 0 < a < c");
  return std::pow(a, -alpha - 1.0) * std::pow(1.0 - a / c, alpha - 2.0);
}

double center_jump_density(double alpha, double a, double c) {
  check_alpha(alpha);
  if (!(a > 0.0 && a <= c / 2.0)) throw RangeError("center_jump_density: need 0 < a <= c/2");
  const double b = c - a;
  return std::pow(a, -alpha - 1.0) * std::pow(b / c, -alpha - 1.0);
}

double area_weight(double alpha, double a, double c) {
  check_alpha(alpha);
  if (!(a > 0.0 && a < c)) throw RangeError("area_weight: need 0 < a < c");
  const double b = c - a;
  return std::pow(a / c, 2.0 * alpha - 1.0) + std::pow(b / c, 2.0 * alpha - 1.0);
}

double fold_identity_residual(double alpha, double a, double c) {
  check_alpha(alpha);
  if (!(a > 0.0 && a <= c / 2.0)) throw RangeError("fold_identity_residual: need 0 < a <= c/2");
  const double b = c - a;
  const double lhs = std::pow(a, -alpha - 1.0) * std::pow(b / c, alpha - 2.0) +
                     std::pow(a / c, alpha - 2.0) * std::pow(b, -alpha - 1.0);
  const double rhs = area_weight(alpha, a, c) * center_jump_density(alpha, a, c);
  return std::abs(lhs - rhs) / std::abs(rhs);
}

bool is_big_jump(double c, double lower) {
  if (!(c > 0.0)) throw ParameterError("is_big_jump: c must be positive");
  return lower < c / 2.0;
}

double JumpLawSpec::support_upper() const { return kind == JumpKind::reversal ? c : c / 2.0; }

double JumpLawSpec::density(double a) const {
  switch (kind) {
    case JumpKind::reversal:
      return reversal_jump_density(alpha, a, c);
    case JumpKind::center:
      return center_jump_density(alpha, a, c);
    case JumpKind::weighted:
      return area_weight(alpha, a, c) * center_jump_density(alpha, a, c);
  }
  throw ParameterError("JumpLawSpec: unknown kind");
}

ReversalRatioLaw::ReversalRatioLaw(double alpha, double u_min) : alpha_(alpha), u_min_(u_min) {
  check_alpha(alpha);
  if (!(u_min > 0.0 && u_min < 1.0)) throw ParameterError("ReversalRatioLaw: u_min must lie in (0,1)");
  total_ = tail(u_min);
}

// Mass above u. With v = u/(1-u) the density becomes v^{-alpha-1} + v^{-alpha}.
double ReversalRatioLaw::tail(double u) const {
  const double v = u / (1.0 - u);
  return std::pow(v, -alpha_) / alpha_ + std::pow(v, 1.0 - alpha_) / (alpha_ - 1.0);
}

double ReversalRatioLaw::cdf(double u) const {
  if (u <= u_min_) return 0.0;
  if (u >= 1.0) return 1.0;
  return std::clamp(1.0 - tail(u) / total_, 0.0, 1.0);
}

double hyp2f1_series(double a, double b, double c, double x) {
  if (!(std::abs(x) < 1.0)) throw NumericError("hyp2f1_series: need |x| < 1");
  if (c <= 0.0 && c == std::floor(c)) throw NumericError("hyp2f1_series: c is a nonpositive integer");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 100000; ++k) {
    const double kk = static_cast<double>(k);
    term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * x;
    sum += term;
    if (term == 0.0 || std::abs(term) <= 1e-16 * std::abs(sum)) return sum;
  }
  throw NumericError("hyp2f1_series: no convergence after 100000 terms (a=" + std::to_string(a) +
                     ", b=" + std::to_string(b) + ", c=" + std::to_string(c) + ", x=" + std::to_string(x) + ")");
}

double incomplete_beta(double x, double a, double b) {
  if (!(x > 0.0 && x < 1.0)) throw ParameterError("incomplete_beta: need 0 < x < 1");
  if (a == 0.0) throw NumericError("incomplete_beta: a = 0");
  return std::pow(x, a) / a * hyp2f1_series(a, 1.0 - b, a + 1.0, x);
}

double i_alpha_closed(double alpha) {
  check_alpha(alpha);
  return -std::pow(4.0, alpha) / alpha - 2.0 * incomplete_beta(0.5, -alpha, 1.0 - alpha);
}

double i_alpha_four_term(double alpha) {
  check_alpha(alpha);
  const double tail = std::pow(2.0, alpha - 1.0) / (alpha - 1.0);  // int_{1/2}^inf x^{-alpha} dx
  return -std::pow(4.0, alpha) / alpha - 2.0 * incomplete_beta(0.5, -alpha, 1.0 - alpha) +
         std::pow(2.0, alpha - 1.0) * (1.0 - 2.0 * alpha) / (alpha - 1.0) + (2.0 * alpha - 1.0) * tail;
}

namespace {

// (s)_k / k! coefficients of (1-x)^{-s}
std::vector<double> binomial_series(double s, std::size_t terms) {
  std::vector<double> c(terms);
  c[0] = 1.0;
  for (std::size_t k = 1; k < terms; ++k) c[k] = c[k - 1] * (s + static_cast<double>(k) - 1.0) / static_cast<double>(k);
  return c;
}

}  // namespace

double i_alpha_integrand(double alpha, double x) {
  check_alpha(alpha);
  if (!(x > 0.0 && x <= 0.5)) throw RangeError("i_alpha_integrand: need 0 < x <= 1/2");
  const double lead = std::pow(x, alpha - 2.0) * std::pow(1.0 - x, -alpha - 1.0);
  double tail;
  if (x < 0.1) {
    // g(x) / x^2 = sum_{k>=2} ((2-alpha)_k - (alpha+1)_k) / k! x^{k-2}
    double p = 1.0, q = 1.0, xk = 1.0, s = 0.0;
    for (int k = 1; k < 80; ++k) {
      p *= (2.0 - alpha + k - 1.0) / k;
      q *= (alpha + 1.0 + k - 1.0) / k;
      if (k >= 2) {
        const double t = (p - q) * xk;
        s += t;
        xk *= x;
        if (std::abs(t) < 1e-18 * std::abs(s)) break;
      }
    }
    tail = std::pow(x, 1.0 - alpha) * s;
  } else {
    const double l1 = std::log1p(-x);
    const double g = std::exp((alpha - 2.0) * l1) - std::exp((-alpha - 1.0) * l1) + (2.0 * alpha - 1.0) * x;
    tail = std::pow(x, -alpha - 1.0) * g;
  }
  return lead + tail;
}

double i_alpha_quadrature(double alpha) {
  check_alpha(alpha);
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  const double body =
      integrator.integrate([alpha](double x) { return i_alpha_integrand(alpha, x); }, 0.0, 0.5, 1e-13, &err, &l1);
  if (!std::isfinite(body) || err > 1e-8 * std::max(1.0, l1))
    throw NumericError("i_alpha_quadrature: tolerance not reached (alpha=" + std::to_string(alpha) +
                       ", error estimate=" + std::to_string(err) + ")");
  return body + (2.0 * alpha - 1.0) * std::pow(2.0, alpha - 1.0) / (alpha - 1.0);
}

double find_martingale_alpha(double tol, IMethod method, double lo, double hi) {
  if (!(tol > 0.0)) throw ParameterError("find_martingale_alpha: tol must be positive");
  auto f = [method](double a) { return method == IMethod::closed ? i_alpha_closed(a) : i_alpha_quadrature(a); };
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericError("find_martingale_alpha: no sign change on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SmallJumpMoments small_jump_moments(double alpha, double eps) {
  check_alpha(alpha);
  if (!(eps > 0.0 && eps < 0.25)) throw ParameterError("small_jump_moments: need 0 < eps < 1/4");
  const auto c = binomial_series(alpha + 1.0, 200);
  SmallJumpMoments m;
  double ek = 1.0;  // eps^k
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double kk = static_cast<double>(k);
    if (k >= 1) m.mean_shift -= c[k] * ek * std::pow(eps, 1.0 - alpha) / (kk + 1.0 - alpha);
    m.variance += c[k] * ek * std::pow(eps, 2.0 - alpha) / (kk + 2.0 - alpha);
    m.power_mean += c[k] * ek * std::pow(eps, alpha - 1.0) / (kk + alpha - 1.0);
    ek *= eps;
    if (c[k] * ek < 1e-20) break;
  }
  return m;
}

namespace {

struct MarkSampler {
  double alpha, eps, p;
  double pareto_mass, total_mass, w_pareto;
  double pareto_lo, pareto_span;  // eps^{-alpha}, eps^{-alpha} - 2^{alpha}
  double prop_lo, prop_span;      // eps^{1-alpha}, eps^{1-alpha} - 2^{alpha-1}
  double k_bound;

  MarkSampler(double a, double e) : alpha(a), eps(e), p(2.0 * a - 1.0) {
    pareto_lo = std::pow(eps, -alpha);
    pareto_span = pareto_lo - std::pow(2.0, alpha);
    pareto_mass = pareto_span / alpha;
    total_mass = jump_mass(alpha, eps);
    w_pareto = pareto_mass / total_mass;
    prop_lo = std::pow(eps, 1.0 - alpha);
    prop_span = prop_lo - std::pow(2.0, alpha - 1.0);
    k_bound = 2.0 * (std::pow(2.0, alpha + 1.0) - 1.0);
  }

  double draw(Rng& rng) const {
    if (rng.uniform() < w_pareto) return std::pow(pareto_lo - rng.uniform() * pareto_span, -1.0 / alpha);
    // x^{-alpha-1}((1-x)^{-alpha-1} - 1) by rejection from a density proportional to x^{-alpha}
    for (;;) {
      const double x = std::pow(prop_lo - rng.uniform() * prop_span, 1.0 / (1.0 - alpha));
      const double h = std::expm1((-alpha - 1.0) * std::log1p(-x)) / x;
      if (rng.uniform() * k_bound <= h) return x;
    }
  }
};

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

void check_drift(const DriftParams& p) {
  check_alpha(p.alpha);
  if (!(p.r > 0.0)) throw ParameterError("drift_estimate: r must be positive");
  if (!(p.eps > 0.0 && p.eps < 0.25)) throw ParameterError("drift_estimate: need 0 < eps < 1/4");
  if (p.n < 2) throw ParameterError("drift_estimate: n must be at least 2");
  if (!(p.z > 0.0)) throw ParameterError("drift_estimate: z must be positive");
}

Moments drift_paths(const DriftParams& p, const MarkSampler& marks, const SmallJumpMoments& small, std::size_t count,
                    Rng& rng) {
  const double rate = p.r * marks.total_mass;
  const double ceps = std::pow(p.eps, 1.0 - p.alpha) / (p.alpha - 1.0);
  const bool gauss = p.scheme == SmallJumpScheme::matched_gaussian;
  const double g_mean = p.r * small.mean_shift;
  const double g_sd = std::sqrt(p.r * small.variance);
  const double power_extra = gauss ? p.r * small.power_mean : 0.0;
  Moments acc;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t events = rng.poisson(rate);
    if (events > p.max_events) throw BudgetExceededError("drift_estimate: event cap exceeded on one path");
    double sum = 0.0, powers = 0.0;
    for (std::uint64_t e = 0; e < events; ++e) {
      const double x = marks.draw(rng);
      sum += x;
      powers += std::pow(x, marks.p);
    }
    double m = 1.0 - sum + p.r * ceps;
    if (gauss) m += g_mean + g_sd * rng.normal();
    const double a = std::pow(std::max(m, 0.0), marks.p) + powers + power_extra;
    acc.add((a - 1.0) / p.r);
  }
  return acc;
}

DriftEstimate finish(const DriftParams& p, const Moments& m) {
  DriftEstimate est;
  est.alpha = p.alpha;
  est.r = p.r;
  est.eps = p.eps;
  est.n = m.n;
  est.mean = m.mean;
  est.std_error = std::sqrt(m.m2 / static_cast<double>(m.n - 1) / static_cast<double>(m.n));
  est.halfwidth = p.z * est.std_error;
  est.reference = i_alpha_closed(p.alpha);
  return est;
}

}  // namespace

double jump_mass(double alpha, double eps) {
  check_alpha(alpha);
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("jump_mass: need 0 < eps < 1/2");
  // int_eps^{1/2} x^{-alpha-1} dx + sum_{k>=1} c_k int_eps^{1/2} x^{k-alpha-1} dx
  double mass = (std::pow(eps, -alpha) - std::pow(2.0, alpha)) / alpha;
  const auto c = binomial_series(alpha + 1.0, 400);
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double e = static_cast<double>(k) - alpha;
    const double t = c[k] * (std::pow(0.5, e) - std::pow(eps, e)) / e;
    mass += t;
    if (std::abs(t) < 1e-17 * mass) break;
  }
  return mass;
}

DriftEstimate drift_estimate(const DriftParams& params, Rng& rng) {
  check_drift(params);
  const MarkSampler marks(params.alpha, params.eps);
  const SmallJumpMoments small = small_jump_moments(params.alpha, params.eps);
  return finish(params, drift_paths(params, marks, small, params.n, rng));
}

DriftEstimate drift_estimate(const DriftParams& params, std::uint64_t root_seed, std::uint64_t stream, unsigned jobs) {
  check_drift(params);
  const MarkSampler marks(params.alpha, params.eps);
  const SmallJumpMoments small = small_jump_moments(params.alpha, params.eps);
  Chunking plan{params.n, 10'000};
  auto parts = run_chunks(plan, root_seed, stream, jobs, [&](Rng& rng, std::size_t b, std::size_t e) {
    return drift_paths(params, marks, small, e - b, rng);
  });
  Moments total;
  for (const auto& part : parts) total.merge(part);
  return finish(params, total);
}

}  // namespace levynet::characterization
