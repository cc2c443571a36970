#include "levynet/stable_levy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levynet::stable_levy {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (1,2)");
}

double stable_sigma(double alpha, double levy_scale) {
  check_alpha(alpha);
  if (!(levy_scale > 0.0)) throw ParameterError("levy_scale must be positive");
  const double s = -levy_scale * std::tgamma(-alpha) * std::cos(std::numbers::pi * alpha / 2.0);
  return std::pow(s, 1.0 / alpha);
}

IncrementSampler::IncrementSampler(double alpha, double levy_scale) : alpha_(alpha), inv_alpha_(1.0 / alpha) {
  sigma_ = stable_sigma(alpha, levy_scale);
  const double t = std::tan(std::numbers::pi * alpha / 2.0);
  b_ = std::atan(t) / alpha;
  s_ = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
}

double IncrementSampler::unit(Rng& rng) const {
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  const double w = rng.exponential();
  const double a = alpha_;
  const double x = s_ * std::sin(a * (v + b_)) / std::pow(std::cos(v), inv_alpha_) *
                   std::pow(std::cos(v - a * (v + b_)) / w, (1.0 - a) * inv_alpha_);
  return sigma_ * x;
}

double sample_stable_increment(double alpha, double dt, Rng& rng, double levy_scale) {
  check_alpha(alpha);
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  return IncrementSampler(alpha, levy_scale)(dt, rng);
}

double default_truncation(double alpha, double dt, double levy_scale, double factor) {
  check_alpha(alpha);
  if (!(dt > 0.0) || !(factor > 0.0)) throw ParameterError("default_truncation: dt and factor must be positive");
  return factor * std::pow(levy_scale * dt, 1.0 / alpha);
}

double jump_rate_above(double alpha, double eps, double levy_scale) {
  return levy_scale * std::pow(eps, -alpha) / alpha;
}

double compensator_rate(double alpha, double eps, double levy_scale) {
  return levy_scale * std::pow(eps, 1.0 - alpha) / (alpha - 1.0);
}

double small_jump_variance_rate(double alpha, double eps, double levy_scale) {
  return levy_scale * std::pow(eps, 2.0 - alpha) / (2.0 - alpha);
}

Stepper::Stepper(double alpha, const PathScheme& scheme)
    : alpha_(alpha), scheme_(scheme), eps_(0.0), rate_(0.0), drift_(0.0), small_var_(0.0),
      marginal_(alpha, scheme.levy_scale) {
  if (!(scheme.grid_dt > 0.0)) throw ParameterError("grid_dt must be positive");
  if (scheme.increments == Increments::exact_marginal) {
    eps_ = std::numeric_limits<double>::infinity();
    return;
  }
  eps_ = scheme.truncation > 0.0
             ? scheme.truncation
             : default_truncation(alpha, scheme.grid_dt, scheme.levy_scale, scheme.truncation_factor);
  rate_ = jump_rate_above(alpha, eps_, scheme.levy_scale);
  drift_ = compensator_rate(alpha, eps_, scheme.levy_scale);
  if (scheme.small_jumps == SmallJumps::matched_gaussian)
    small_var_ = small_jump_variance_rate(alpha, eps_, scheme.levy_scale);
}

double Stepper::step(double t0, double dt, Rng& rng, std::vector<Jump>* jumps) {
  if (scheme_.increments == Increments::exact_marginal) return marginal_(dt, rng);

  const std::uint64_t count = rng.poisson(rate_ * dt);
  double inc = -drift_ * dt;
  if (count > 0) {
    const std::size_t first = jumps ? jumps->size() : 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double size = eps_ * std::pow(rng.uniform_open(), -1.0 / alpha_);
      const double when = quantize_time(t0 + dt * rng.uniform());
      inc += size;
      if (jumps) jumps->push_back({when, size});
    }
    if (jumps && count > 1)
      std::sort(jumps->begin() + static_cast<std::ptrdiff_t>(first), jumps->end(),
                [](const Jump& a, const Jump& b) { return a.time < b.time; });
  }
  if (small_var_ > 0.0) inc += std::sqrt(small_var_ * dt) * rng.normal();
  return inc;
}

StablePath sample_path(double alpha, double x0, double duration, const PathScheme& scheme, Rng& rng) {
  check_alpha(alpha);
  if (!(duration > 0.0)) throw ParameterError("duration must be positive");
  Stepper stepper(alpha, scheme);
  const auto steps = static_cast<std::size_t>(std::ceil(duration / scheme.grid_dt - 1e-9));
  if (steps > scheme.max_steps) throw BudgetExceededError("sample_path: step budget exceeded");
  StablePath path;
  path.alpha = alpha;
  path.levy_scale = scheme.levy_scale;
  path.truncation = stepper.truncation();
  path.times.reserve(steps + 1);
  path.values.reserve(steps + 1);
  path.times.push_back(0.0);
  path.values.push_back(x0);
  double x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = path.times.back();
    const double t1 = quantize_time(std::min(duration, static_cast<double>(k + 1) * scheme.grid_dt));
    x += stepper.step(t0, t1 - t0, rng, &path.jumps);
    path.times.push_back(t1);
    path.values.push_back(x);
  }
  return path;
}

StablePath sample_excursion_approx(double alpha, double eps_start, double stop_cap, double grid_dt, Rng& rng,
                                   PathScheme scheme) {
  check_alpha(alpha);
  if (!(eps_start > 0.0) || !(stop_cap > eps_start)) throw ParameterError("need 0 < eps_start < stop_cap");
  if (!(grid_dt > 0.0)) throw ParameterError("grid_dt must be positive");
  scheme.grid_dt = grid_dt;
  Stepper stepper(alpha, scheme);
  StablePath path;
  path.alpha = alpha;
  path.levy_scale = scheme.levy_scale;
  path.truncation = stepper.truncation();
  path.times.push_back(0.0);
  path.values.push_back(eps_start);
  double x = eps_start;
  for (std::size_t k = 0;; ++k) {
    if (k >= scheme.max_steps)
      throw ExcursionBudgetExceeded("sample_excursion_approx: step budget exceeded", std::move(path));
    const double t0 = path.times.back();
    const double t1 = quantize_time(static_cast<double>(k + 1) * grid_dt);
    x += stepper.step(t0, t1 - t0, rng, &path.jumps);
    path.times.push_back(t1);
    path.values.push_back(x);
    if (x <= 0.0) {
      path.exit = ExitSide::lower;
      return path;
    }
    if (x >= stop_cap) {
      path.exit = ExitSide::upper;
      return path;
    }
  }
}

double exit_upper_probability(double alpha, double eps, double stop_cap) {
  check_alpha(alpha);
  if (!(eps > 0.0) || !(stop_cap > eps)) throw ParameterError("need 0 < eps < stop_cap");
  return -std::expm1((alpha - 1.0) * std::log1p(-eps / stop_cap));
}

StablePath reverse_path(const StablePath& path) {
  StablePath out = path;
  const std::size_t n = path.times.size();
  if (n == 0) return out;
  const double total = path.times.back();
  for (std::size_t i = 0; i < n; ++i) {
    out.times[i] = total - path.times[n - 1 - i];
    out.values[i] = path.values[n - 1 - i];
  }
  const std::size_t m = path.jumps.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Jump& j = path.jumps[m - 1 - i];
    out.jumps[i] = {total - j.time, -j.size};
  }
  return out;
}

std::vector<Jump> extract_jumps(const StablePath& path, double threshold) {
  if (!(threshold >= path.truncation))
    throw ParameterError("extract_jumps: threshold below the path truncation");
  std::vector<Jump> out;
  for (const Jump& j : path.jumps)
    if (std::abs(j.size) >= threshold) out.push_back(j);
  return out;
}

std::vector<JumpLevel> jump_levels(const StablePath& path) {
  std::vector<JumpLevel> out;
  out.reserve(path.jumps.size());
  const std::size_t n = path.times.size();
  if (n < 2) return out;
  std::size_t j = 0;
  for (std::size_t k = 0; k + 1 < n && j < path.jumps.size(); ++k) {
    const double t0 = path.times[k];
    const double t1 = path.times[k + 1];
    const bool last = (k + 2 == n);
    std::size_t first = j;
    double sum = 0.0;
    while (j < path.jumps.size() && (path.jumps[j].time < t1 || (last && path.jumps[j].time <= t1))) {
      sum += path.jumps[j].size;
      ++j;
    }
    const double cont = path.values[k + 1] - path.values[k] - sum;
    double acc = 0.0;
    for (std::size_t i = first; i < j; ++i) {
      const Jump& jp = path.jumps[i];
      const double frac = t1 > t0 ? (jp.time - t0) / (t1 - t0) : 0.0;
      const double before = path.values[k] + cont * frac + acc;
      out.push_back({jp.time, jp.size, before, before + jp.size});
      acc += jp.size;
    }
  }
  return out;
}

void validate(const StablePath& path) {
  check_alpha(path.alpha);
  if (path.times.empty() || path.times.size() != path.values.size())
    throw StructureError("times/values must be non-empty and of equal length");
  if (path.times.front() != 0.0) throw StructureError("times must start at 0");
  for (std::size_t i = 1; i < path.times.size(); ++i)
    if (!(path.times[i] > path.times[i - 1])) throw StructureError("times must be strictly increasing");
  for (std::size_t i = 0; i < path.jumps.size(); ++i) {
    if (std::abs(path.jumps[i].size) < path.truncation) throw StructureError("jump below truncation");
    if (i > 0 && path.jumps[i].time < path.jumps[i - 1].time) throw StructureError("jumps out of time order");
  }
}

}  // namespace levynet::stable_levy
