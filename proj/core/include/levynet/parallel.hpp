#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

#include "levynet/random.hpp"

namespace levynet {

// Work split into fixed-size chunks. Chunk boundaries depend only on the
// totals, never on the number of workers, so results are bit-identical
// for any `jobs`.
struct Chunking {
  std::size_t total = 0;
  std::size_t chunk = 1;

  std::size_t count() const { return chunk == 0 ? 0 : (total + chunk - 1) / chunk; }
  std::size_t begin(std::size_t c) const { return c * chunk; }
  std::size_t end(std::size_t c) const { return std::min(total, (c + 1) * chunk); }
};

inline unsigned resolve_jobs(unsigned jobs) {
  if (jobs != 0) return jobs;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Calls fn(c) for c in [0, n) on up to `jobs` threads, results in index order.
template <class F>
auto map_indexed(std::size_t n, unsigned jobs, F&& fn) {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<R> out(n);
  const unsigned workers = std::min<std::size_t>(resolve_jobs(jobs), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t c = 0; c < n; ++c) out[c] = fn(c);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n) return;
      try {
        out[c] = fn(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

// Seeded ensemble: chunk c gets Rng(derive_seed(root, stream, c)) and is
// evaluated as fn(rng, begin, end).
template <class F>
auto run_chunks(const Chunking& plan, std::uint64_t root, std::uint64_t stream, unsigned jobs, F&& fn) {
  return map_indexed(plan.count(), jobs, [&](std::size_t c) {
    Rng rng = Rng::for_stream(root, stream, c);
    return fn(rng, plan.begin(c), plan.end(c));
  });
}

// Fills out[i] for every i in [0, total) chunk-wise.
template <class T, class F>
std::vector<T> generate_ensemble(std::size_t total, std::size_t chunk, std::uint64_t root, std::uint64_t stream,
                                 unsigned jobs, F&& draw) {
  Chunking plan{total, std::max<std::size_t>(chunk, 1)};
  auto parts = run_chunks(plan, root, stream, jobs, [&](Rng& rng, std::size_t b, std::size_t e) {
    std::vector<T> local;
    local.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) local.push_back(draw(rng));
    return local;
  });
  std::vector<T> out;
  out.reserve(total);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace levynet
