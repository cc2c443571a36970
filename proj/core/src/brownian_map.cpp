#include "levynet/brownian_map.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "levynet/error.hpp"
#include "levynet/parallel.hpp"

namespace levynet::brownian_map {

double quantize_head(double v) { return std::nearbyint(v / kHeadQuantum) * kHeadQuantum; }

std::vector<double> sample_excursion(std::size_t n, Rng& rng) {
  if (n < 2) throw ParameterError("sample_excursion: need n >= 2");
  const double sd = std::sqrt(1.0 / static_cast<double>(n));
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) w[k] = w[k - 1] + sd * rng.normal();
  std::vector<double> b(n + 1);
  for (std::size_t k = 0; k <= n; ++k) b[k] = w[k] - static_cast<double>(k) / static_cast<double>(n) * w[n];
  const auto m = static_cast<std::size_t>(std::min_element(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n)) -
                                          b.begin());
  std::vector<double> e(n + 1);
  for (std::size_t k = 0; k < n; ++k) e[k] = b[(m + k) % n] - b[m];
  e[0] = 0.0;
  e[n] = 0.0;
  return e;
}

namespace {

std::size_t argmin_index(const std::vector<double>& x, std::size_t n) {
  return static_cast<std::size_t>(std::min_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)) -
                                  x.begin());
}

}  // namespace

SnakeSample sample_discrete_snake(std::size_t steps, Rng& rng) {
  if (steps < 2 || steps % 2 != 0) throw ParameterError("sample_discrete_snake: steps must be even and >= 2");
  const std::size_t half = steps / 2;
  // half up-steps and half + 1 down-steps, shuffled, then the cyclic-lemma rotation
  std::vector<int> seq(steps + 1, -1);
  std::fill(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(half), 1);
  for (std::size_t i = seq.size() - 1; i > 0; --i) std::swap(seq[i], seq[rng.below(i + 1)]);
  long sum = 0, best = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    sum += seq[i];
    if (sum < best) {
      best = sum;
      start = i + 1;
    }
  }
  SnakeSample s;
  s.n = steps;
  s.variant = Variant::lattice;
  s.y.assign(steps + 1, 0.0);
  s.x.assign(steps + 1, 0.0);
  std::vector<double> body{0.0};
  for (std::size_t k = 0; k < steps; ++k) {
    const int step = seq[(start + k) % seq.size()];
    if (step > 0) {
      body.push_back(body.back() + (rng.bernoulli(0.5) ? 1.0 : -1.0));
    } else {
      body.pop_back();
    }
    s.y[k + 1] = s.y[k] + step;
    s.x[k + 1] = body.back();
  }
  s.root_index = argmin_index(s.x, s.n);
  return s;
}

SnakeSample sample_gaussian_snake(std::size_t n_grid, Rng& rng) {
  if (n_grid < 4) throw ParameterError("sample_gaussian_snake: n_grid must be >= 4");
  SnakeSample s;
  s.n = n_grid;
  s.variant = Variant::gaussian;
  s.y = sample_excursion(n_grid, rng);
  s.x.assign(n_grid + 1, 0.0);
  struct Node {
    double y;
    double x;
  };
  std::vector<Node> body{{0.0, 0.0}};
  for (std::size_t k = 0; k < n_grid; ++k) {
    const double yn = s.y[k + 1];
    if (yn >= body.back().y) {
      const double dy = yn - body.back().y;
      body.push_back({yn, quantize_head(body.back().x + std::sqrt(dy) * rng.normal())});
    } else {
      Node upper = body.back();
      while (body.back().y > yn) {
        upper = body.back();
        body.pop_back();
      }
      const Node lower = body.back();
      if (lower.y < yn) {
        // Brownian bridge between the retained ancestor and the discarded node
        const double span = upper.y - lower.y;
        const double mean = lower.x + (yn - lower.y) / span * (upper.x - lower.x);
        const double var = (yn - lower.y) * (upper.y - yn) / span;
        body.push_back({yn, quantize_head(mean + std::sqrt(var) * rng.normal())});
      }
    }
    s.x[k + 1] = body.back().x;
  }
  s.root_index = argmin_index(s.x, s.n);
  return s;
}

double d_circ(const std::vector<double>& x, std::size_t s, std::size_t t) {
  if (s >= x.size() || t >= x.size()) throw RangeError("d_circ: index out of range");
  if (s == t) return 0.0;
  const std::size_t lo = std::min(s, t), hi = std::max(s, t);
  double inner = x[lo];
  for (std::size_t i = lo; i <= hi; ++i) inner = std::min(inner, x[i]);
  double outer = x[hi];
  for (std::size_t i = hi; i < x.size(); ++i) outer = std::min(outer, x[i]);
  for (std::size_t i = 0; i <= lo; ++i) outer = std::min(outer, x[i]);
  return x[s] + x[t] - 2.0 * std::max(inner, outer);
}

double d_circ(const SnakeSample& sample, std::size_t s, std::size_t t) {
  if (s > sample.n || t > sample.n) throw RangeError("d_circ: index out of range");
  return d_circ(sample.x, s, t);
}

namespace {

class RangeMin {
 public:
  explicit RangeMin(const std::vector<double>& v) {
    const std::size_t n = v.size();
    const std::size_t levels = static_cast<std::size_t>(std::bit_width(n));
    table_.assign(levels, std::vector<double>(n));
    table_[0] = v;
    for (std::size_t l = 1; l < levels; ++l) {
      const std::size_t w = std::size_t{1} << (l - 1);
      for (std::size_t i = 0; i + (w << 1) <= n; ++i) table_[l][i] = std::min(table_[l - 1][i], table_[l - 1][i + w]);
    }
  }
  // min over [lo, hi]
  double query(std::size_t lo, std::size_t hi) const {
    const std::size_t len = hi - lo + 1;
    const std::size_t l = static_cast<std::size_t>(std::bit_width(len)) - 1;
    return std::min(table_[l][lo], table_[l][hi + 1 - (std::size_t{1} << l)]);
  }

 private:
  std::vector<std::vector<double>> table_;
};

}  // namespace

SquareMatrix d_circ_matrix(const SnakeSample& sample, const std::vector<std::size_t>& points) {
  const auto& x = sample.x;
  for (std::size_t p : points)
    if (p >= x.size()) throw RangeError("d_circ_matrix: index out of range");
  RangeMin rmq(x);
  std::vector<double> prefix(x.size()), suffix(x.size());
  std::partial_sum(x.begin(), x.end(), prefix.begin(), [](double a, double b) { return std::min(a, b); });
  suffix.back() = x.back();
  for (std::size_t i = x.size() - 1; i-- > 0;) suffix[i] = std::min(suffix[i + 1], x[i]);
  const std::size_t m = points.size();
  SquareMatrix d(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::size_t s = std::min(points[i], points[j]);
      const std::size_t t = std::max(points[i], points[j]);
      double v = 0.0;
      if (s != t) {
        const double inner = rmq.query(s, t);
        const double outer = std::min(prefix[s], suffix[t]);
        v = x[s] + x[t] - 2.0 * std::max(inner, outer);
      }
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

SquareMatrix metric_closure(const SquareMatrix& in, unsigned jobs) {
  if (in.data.size() != in.m * in.m) throw StructureError("metric_closure: matrix is not square");
  SquareMatrix d = in;
  const std::size_t m = d.m;
  const unsigned workers = std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(m, 1));
  const std::size_t block = (m + workers - 1) / std::max(1u, workers);
  for (std::size_t k = 0; k < m; ++k) {
    const double* rk = &d.data[k * m];
    auto relax_rows = [&](std::size_t b) {
      const std::size_t lo = b * block, hi = std::min(m, lo + block);
      for (std::size_t i = lo; i < hi; ++i) {
        double* ri = &d.data[i * m];
        const double dik = ri[k];
        for (std::size_t j = 0; j < m; ++j) {
          const double via = dik + rk[j];
          ri[j] = via < ri[j] ? via : ri[j];
        }
      }
      return 0;
    };
    if (workers <= 1) {
      relax_rows(0);
    } else {
      map_indexed(workers, workers, relax_rows);
    }
  }
  return d;
}

SquareMatrix metric_closure(const std::vector<std::vector<double>>& rows, unsigned jobs) {
  const std::size_t m = rows.size();
  SquareMatrix d(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) throw StructureError("metric_closure: matrix is not square");
    for (std::size_t j = 0; j < m; ++j) d(i, j) = rows[i][j];
  }
  return metric_closure(d, jobs);
}

std::vector<std::size_t> select_points(const SnakeSample& sample, std::size_t m, Rng& rng) {
  const std::size_t n = sample.n;  // indices 0..n-1; n is the same tree point as 0
  if (m < 1 || m > n) throw ParameterError("select_points: need 1 <= m <= n");
  std::vector<std::size_t> pts{sample.root_index};
  std::vector<char> taken(n, 0);
  taken[sample.root_index] = 1;
  while (pts.size() < m) {
    const auto p = static_cast<std::size_t>(rng.below(n));
    if (!taken[p]) {
      taken[p] = 1;
      pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

MetricMatrix compute_metric(const SnakeSample& sample, const std::vector<std::size_t>& points, unsigned jobs) {
  MetricMatrix mm;
  mm.point_times = points;
  mm.d_circ = d_circ_matrix(sample, points);
  mm.d = metric_closure(mm.d_circ, jobs);
  return mm;
}

MetricCheck check_metric(const SnakeSample& sample, const MetricMatrix& metric) {
  MetricCheck c;
  const auto& d = metric.d;
  const auto& dc = metric.d_circ;
  const std::size_t m = d.m;
  const auto& pts = metric.point_times;
  const double min_x = sample.x[sample.root_index];
  for (std::size_t i = 0; i < m; ++i) {
    if (d(i, i) != 0.0) c.zero_diagonal = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (d(i, j) != d(j, i)) c.symmetric = false;
      if (d(i, j) > dc(i, j)) c.below_d_circ = false;
      if (dc(i, j) < std::abs(sample.x[pts[i]] - sample.x[pts[j]])) c.d_circ_above_gap = false;
    }
  }
  for (std::size_t k = 0; k < m && c.triangle; ++k)
    for (std::size_t i = 0; i < m && c.triangle; ++i) {
      const double dik = d(i, k);
      for (std::size_t j = 0; j < m; ++j)
        if (d(i, j) > dik + d(k, j)) {
          c.triangle = false;
          break;
        }
    }
  const auto root = std::find(pts.begin(), pts.end(), sample.root_index);
  if (root == pts.end()) {
    c.root_distance = false;
  } else {
    const auto r = static_cast<std::size_t>(root - pts.begin());
    for (std::size_t j = 0; j < m; ++j)
      if (d(r, j) != sample.x[pts[j]] - min_x) c.root_distance = false;
  }
  return c;
}

bool zero_distance_consistent(const MetricMatrix& metric) {
  const std::size_t m = metric.d.m;
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (metric.d_circ(i, j) == 0.0) parent[find(i)] = find(j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if ((metric.d(i, j) == 0.0) != (find(i) == find(j))) return false;
  return true;
}

std::size_t exit_point_count(const SnakeSample& sample, double a, double min_height) {
  if (!(a < 0.0)) throw RangeError("hull: level must be negative");
  struct Entry {
    double y;
    double anc_min;
    bool exit;
    double sub_max;
  };
  std::size_t count = 0;
  std::vector<Entry> stack{{sample.y[0], sample.x[0], false, sample.y[0]}};
  auto pop = [&] {
    const Entry e = stack.back();
    stack.pop_back();
    if (e.exit && e.sub_max - e.y >= min_height) ++count;
    if (!stack.empty()) stack.back().sub_max = std::max(stack.back().sub_max, e.sub_max);
  };
  for (std::size_t k = 1; k <= sample.n; ++k) {
    const double yk = sample.y[k];
    while (stack.size() > 1 && stack.back().y > yk) pop();
    if (stack.back().y == yk) {
      stack.back().sub_max = std::max(stack.back().sub_max, yk);
      continue;
    }
    const Entry& parent = stack.back();
    const double xk = sample.x[k];
    stack.push_back({yk, std::min(parent.anc_min, xk), xk <= a && parent.anc_min > a, yk});
  }
  while (!stack.empty()) pop();
  return count;
}

double hull_boundary_length(const SnakeSample& sample, double a, double eps) {
  if (!(eps >= 0.0)) throw ParameterError("hull: eps must be nonnegative");
  if (!(a < 0.0)) throw RangeError("hull: level must be negative");
  const double min_x = sample.x[sample.root_index];
  if (a < min_x) return 0.0;
  const auto count = static_cast<double>(exit_point_count(sample, a, eps));
  return eps > 0.0 ? eps * count : count;
}

std::uint64_t sample_lifetime_length(Rng& rng, std::uint64_t max_steps) {
  std::int64_t h = 1;
  std::uint64_t steps = 0;
  while (steps < max_steps) {
    std::uint64_t bits = rng.engine()();
    for (int b = 0; b < 64 && steps < max_steps; ++b, bits >>= 1) {
      h += (bits & 1u) ? 1 : -1;
      ++steps;
      if (h == 0) return steps;
    }
  }
  return max_steps;
}

double excursion_midpoint_variance() { return 0.75 - 2.0 / std::numbers::pi; }

}  // namespace levynet::brownian_map
