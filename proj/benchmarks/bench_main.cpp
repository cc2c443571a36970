#include <benchmark/benchmark.h>

#include "levynet/brownian_map.hpp"
#include "levynet/characterization.hpp"
#include "levynet/csbp.hpp"
#include "levynet/stable_forest.hpp"
#include "levynet/stable_levy.hpp"

using namespace levynet;

static void BM_IncrementUnit(benchmark::State& state) {
  const stable_levy::IncrementSampler s(1.5);
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(s.unit(rng));
}
BENCHMARK(BM_IncrementUnit);

static void BM_CsbpRun(benchmark::State& state) {
  const csbp::Simulator sim(1.5, csbp::kDefaultStep);
  const std::vector<double> at{1.0};
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(1.0, at, rng).values[0]);
}
BENCHMARK(BM_CsbpRun)->Unit(benchmark::kMicrosecond);

static void BM_ConditionedTree(benchmark::State& state) {
  const auto law = stable_forest::offspring_law(1.5);
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stable_forest::sample_conditioned_tree(law, n, rng).heights.back());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConditionedTree)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_MetricClosure(benchmark::State& state) {
  Rng rng(4);
  const auto snake = brownian_map::sample_discrete_snake(4096, rng);
  const auto pts = brownian_map::select_points(snake, static_cast<std::size_t>(state.range(0)), rng);
  const auto d = brownian_map::d_circ_matrix(snake, pts);
  for (auto _ : state) benchmark::DoNotOptimize(brownian_map::metric_closure(d).data[1]);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MetricClosure)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_IAlphaClosed(benchmark::State& state) {
  double a = 1.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(characterization::i_alpha_closed(a));
    a = a > 1.85 ? 1.1 : a + 0.01;
  }
}
BENCHMARK(BM_IAlphaClosed);

static void BM_IAlphaQuadrature(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(characterization::i_alpha_quadrature(1.25));
}
BENCHMARK(BM_IAlphaQuadrature)->Unit(benchmark::kMicrosecond);

static void BM_DriftPaths(benchmark::State& state) {
  characterization::DriftParams p;
  p.n = 10'000;
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(characterization::drift_estimate(p, rng).mean);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.n));
}
BENCHMARK(BM_DriftPaths)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
