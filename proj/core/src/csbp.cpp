#include "levynet/csbp.hpp"

#include <algorithm>
#include <cmath>

#include "levynet/error.hpp"
#include "levynet/parallel.hpp"
#include "levynet/stats.hpp"

namespace levynet::csbp {

using stable_levy::check_alpha;

double CsbpPath::value_at(double s) const {
  if (absorption_time && s >= *absorption_time) return 0.0;
  if (times.empty() || s < times.front()) throw RangeError("value_at: time before start");
  auto it = std::upper_bound(times.begin(), times.end(), s);
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

double branching_levy_scale(double alpha) {
  check_alpha(alpha);
  return 1.0 / std::tgamma(-alpha);
}

double u_lambda(double alpha, double lambda, double t) {
  check_alpha(alpha);
  if (!(lambda > 0.0)) throw ParameterError("u_lambda: lambda must be positive");
  if (!(t >= 0.0)) throw ParameterError("u_lambda: t must be nonnegative");
  return std::pow(std::pow(lambda, 1.0 - alpha) + (alpha - 1.0) * t, 1.0 / (1.0 - alpha));
}

double laplace(double alpha, double y0, double lambda, double t) {
  if (!(y0 >= 0.0)) throw ParameterError("laplace: y0 must be nonnegative");
  return std::exp(-y0 * u_lambda(alpha, lambda, t));
}

double u_infinity(double alpha, double t) {
  check_alpha(alpha);
  if (!(t > 0.0)) throw ParameterError("u_infinity: t must be positive");
  return std::pow((alpha - 1.0) * t, 1.0 / (1.0 - alpha));
}

double extinction_tail(double alpha, double y0, double t) {
  if (!(y0 > 0.0)) throw ParameterError("extinction_tail: y0 must be positive");
  return -std::expm1(-y0 * u_infinity(alpha, t));
}

double extinction_cdf(double alpha, double y0, double t) {
  if (!(y0 > 0.0)) throw ParameterError("extinction_cdf: y0 must be positive");
  if (t <= 0.0) return 0.0;
  return std::exp(-y0 * u_infinity(alpha, t));
}

double sample_extinction_time(double alpha, double y0, Rng& rng) {
  check_alpha(alpha);
  if (!(y0 > 0.0)) throw ParameterError("sample_extinction_time: y0 must be positive");
  // exp(-y0 ((alpha-1) t)^{-1/(alpha-1)}) = U
  const double e = rng.exponential();
  return std::pow(y0 / e, alpha - 1.0) / (alpha - 1.0);
}

CsbpPath lamperti(const StablePath& levy, double output_dt) {
  return lamperti(std::make_shared<const StablePath>(levy), output_dt);
}

CsbpPath lamperti(std::shared_ptr<const StablePath> levy, double output_dt) {
  if (!levy) throw ParameterError("lamperti: null path");
  const StablePath& p = *levy;
  check_alpha(p.alpha);
  if (p.values.empty() || !(p.values.front() > 0.0)) throw ParameterError("lamperti: start must be positive");
  if (output_dt < 0.0) throw ParameterError("lamperti: output_dt must be nonnegative");

  // natural CSBP times T_k of the Levy grid points
  const std::size_t n = p.times.size();
  std::vector<double> big_t;
  big_t.reserve(n);
  big_t.push_back(0.0);
  std::optional<double> absorbed;
  std::size_t alive = n;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double dt = p.times[k + 1] - p.times[k];
    const double step = dt / p.values[k];
    if (p.values[k + 1] <= 0.0) {
      const double frac = p.values[k] / (p.values[k] - p.values[k + 1]);
      absorbed = big_t.back() + frac * step;
      alive = k + 1;
      break;
    }
    big_t.push_back(big_t.back() + step);
  }

  CsbpPath out;
  out.alpha = p.alpha;
  out.absorption_time = absorbed;
  out.source = levy;
  if (output_dt == 0.0) {
    out.times.assign(big_t.begin(), big_t.begin() + static_cast<std::ptrdiff_t>(alive));
    out.values.assign(p.values.begin(), p.values.begin() + static_cast<std::ptrdiff_t>(alive));
    if (absorbed) {
      out.times.push_back(*absorbed);
      out.values.push_back(0.0);
    }
    return out;
  }
  const double end = absorbed ? *absorbed : big_t.back();
  std::size_t k = 0;
  for (std::size_t j = 0;; ++j) {
    const double s = static_cast<double>(j) * output_dt;
    if (s > end + 1e-12 * output_dt) break;
    double v = 0.0;
    if (!(absorbed && s >= *absorbed)) {
      while (k + 1 < alive && big_t[k + 1] <= s) ++k;
      v = p.values[k];
    }
    out.times.push_back(s);
    out.values.push_back(v);
  }
  return out;
}

StablePath sample_lamperti_driver(double alpha, double y0, double h, double horizon, Rng& rng) {
  check_alpha(alpha);
  if (!(y0 > 0.0)) throw ParameterError("driver: y0 must be positive");
  if (!(h > 0.0) || !(horizon > 0.0)) throw ParameterError("driver: h and horizon must be positive");
  const double c = branching_levy_scale(alpha);
  stable_levy::IncrementSampler inc(alpha, c);
  StablePath path;
  path.alpha = alpha;
  path.levy_scale = c;
  path.truncation = std::numeric_limits<double>::infinity();
  path.times.push_back(0.0);
  path.values.push_back(y0);
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
  double x = y0;
  double t = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double dt = h * x;
    x += inc(dt, rng);
    t = std::max(t + dt, std::nextafter(t, std::numeric_limits<double>::infinity()));
    path.times.push_back(t);
    path.values.push_back(x);
    if (x <= 0.0) break;
  }
  return path;
}

Simulator::Simulator(double alpha, double h) : alpha_(alpha), h_(h), inc_(alpha, branching_levy_scale(alpha)) {
  if (!(h > 0.0)) throw ParameterError("Simulator: h must be positive");
}

Simulator::Result Simulator::run(double y0, const std::vector<double>& at, Rng& rng, double horizon) const {
  if (!(y0 > 0.0)) throw ParameterError("Simulator::run: y0 must be positive");
  if (!std::is_sorted(at.begin(), at.end())) throw ParameterError("Simulator::run: times must be sorted");
  if (!at.empty() && at.front() < 0.0) throw ParameterError("Simulator::run: negative time");
  Result res;
  res.values.assign(at.size(), 0.0);
  const double end = std::max(horizon, at.empty() ? 0.0 : at.back());
  const auto steps = static_cast<std::size_t>(std::ceil(end / h_ - 1e-9));
  std::size_t next = 0;
  double x = y0;
  for (std::size_t k = 0;; ++k) {
    // x is the value on [k h, (k+1) h)
    if (k == steps) {
      while (next < at.size()) res.values[next++] = x;
      break;
    }
    const double xn = x + inc_(h_ * x, rng);
    if (xn <= 0.0) {
      res.absorption_time = (static_cast<double>(k) + x / (x - xn)) * h_;
      while (next < at.size() && at[next] < res.absorption_time) res.values[next++] = x;
      break;
    }
    const double upper = static_cast<double>(k + 1) * h_;
    while (next < at.size() && at[next] < upper) res.values[next++] = x;
    x = xn;
  }
  return res;
}

Simulator::Sup Simulator::run_sup(double y0, double horizon, Rng& rng) const {
  if (!(y0 > 0.0)) throw ParameterError("Simulator::run_sup: y0 must be positive");
  Sup out;
  out.sup = y0;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / h_ - 1e-9));
  double x = y0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double xn = x + inc_(h_ * x, rng);
    if (xn <= 0.0) {
      out.absorption_time = (static_cast<double>(k) + x / (x - xn)) * h_;
      break;
    }
    x = xn;
    if (static_cast<double>(k + 1) * h_ <= horizon) out.sup = std::max(out.sup, x);
  }
  return out;
}

double Simulator::absorption_before(double y0, double horizon, Rng& rng, double floor) const {
  if (!(y0 > 0.0)) throw ParameterError("Simulator::absorption_before: y0 must be positive");
  if (!(floor >= 0.0)) throw ParameterError("Simulator::absorption_before: floor must be nonnegative");
  const double inf = std::numeric_limits<double>::infinity();
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / h_ - 1e-9));
  double x = y0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h_;
    if (x < floor) {
      const double zeta = t + sample_extinction_time(alpha_, x, rng);
      return zeta <= horizon ? zeta : inf;
    }
    const double xn = x + inc_(h_ * x, rng);
    if (xn <= 0.0) {
      const double zeta = (static_cast<double>(k) + x / (x - xn)) * h_;
      return zeta <= horizon ? zeta : inf;
    }
    x = xn;
  }
  return inf;
}

CsbpPath simulate(double alpha, double y0, double horizon, double h, Rng& rng) {
  return lamperti(std::make_shared<const StablePath>(sample_lamperti_driver(alpha, y0, h, horizon, rng)));
}

namespace {

struct RatioPart {
  std::vector<double> ratios;
  std::size_t discarded = 0;
};

RatioPart ratio_samples(const Simulator& sim, double a, double b, double t, std::size_t n, Rng& rng) {
  RatioPart part;
  part.ratios.reserve(n);
  const std::vector<double> at{t};
  for (std::size_t i = 0; i < n; ++i) {
    const double va = sim.run(a, at, rng).values[0];
    const double vb = sim.run(b, at, rng).values[0];
    if (va + vb > 0.0)
      part.ratios.push_back(va / (va + vb));
    else
      ++part.discarded;
  }
  return part;
}

RatioEstimate summarize(const std::vector<double>& ratios, std::size_t discarded) {
  if (ratios.size() < 2) throw DegenerateSampleError("subordinator_ratio_estimate: all pairs extinct");
  auto ci = harness::mean_ci(ratios);
  RatioEstimate est;
  est.mean = ci.mean;
  est.halfwidth = ci.halfwidth;
  est.std_error = ci.std_error;
  est.used = ratios.size();
  est.discarded = discarded;
  est.discard_rate = static_cast<double>(discarded) / static_cast<double>(discarded + ratios.size());
  return est;
}

void check_ratio_args(double alpha, double a, double b, double t, std::size_t n) {
  check_alpha(alpha);
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("subordinator_ratio_estimate: a and b must be positive");
  if (!(t > 0.0)) throw ParameterError("subordinator_ratio_estimate: t must be positive");
  if (n < 2) throw ParameterError("subordinator_ratio_estimate: n must be at least 2");
}

}  // namespace

RatioEstimate subordinator_ratio_estimate(double alpha, double a, double b, double t, std::size_t n, Rng& rng,
                                          double h) {
  check_ratio_args(alpha, a, b, t, n);
  Simulator sim(alpha, h);
  RatioPart part = ratio_samples(sim, a, b, t, n, rng);
  return summarize(part.ratios, part.discarded);
}

RatioEstimate subordinator_ratio_estimate(double alpha, double a, double b, double t, std::size_t n,
                                          std::uint64_t root, std::uint64_t stream, unsigned jobs, double h) {
  check_ratio_args(alpha, a, b, t, n);
  Simulator sim(alpha, h);
  Chunking plan{n, 2000};
  auto parts = run_chunks(plan, root, stream, jobs, [&](Rng& rng, std::size_t begin, std::size_t end) {
    return ratio_samples(sim, a, b, t, end - begin, rng);
  });
  std::vector<double> all;
  std::size_t discarded = 0;
  for (auto& p : parts) {
    all.insert(all.end(), p.ratios.begin(), p.ratios.end());
    discarded += p.discarded;
  }
  return summarize(all, discarded);
}

}  // namespace levynet::csbp
