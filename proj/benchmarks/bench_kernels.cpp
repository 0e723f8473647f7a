// Microbenchmarks for the kernels and the strategy layer. These complement
// the cowbench CLI (which runs the full measurement protocol) with quick
// per-operation numbers.

#include <benchmark/benchmark.h>

#include "cowichan/exec.hpp"
#include "cowichan/kernels.hpp"

using namespace cowichan;

namespace {

ExecStrategy strategy_arg(const benchmark::State& state) {
  return ExecStrategy::of(static_cast<StrategyKind>(state.range(0)),
                          static_cast<std::size_t>(state.range(1)));
}

void apply_strategies(benchmark::internal::Benchmark* b) {
  for (StrategyKind kind : all_strategies()) {
    if (kind == StrategyKind::SpawnPerItem) continue;  // covered separately
    b->Args({static_cast<long>(kind), 1});
    b->Args({static_cast<long>(kind), 4});
  }
}

void BM_Randmat(benchmark::State& state) {
  const ExecStrategy s = strategy_arg(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(randmat(512, 512, 42, s));
  }
}
BENCHMARK(BM_Randmat)->Apply(apply_strategies)->Unit(benchmark::kMicrosecond);

void BM_Thresh(benchmark::State& state) {
  const ExecStrategy s = strategy_arg(state);
  const IntMatrix m = randmat(512, 512, 42, ExecStrategy::sequential());
  for (auto _ : state) {
    benchmark::DoNotOptimize(thresh(m, 50, s));
  }
}
BENCHMARK(BM_Thresh)->Apply(apply_strategies)->Unit(benchmark::kMicrosecond);

void BM_Product(benchmark::State& state) {
  const ExecStrategy s = strategy_arg(state);
  const ExecStrategy seq = ExecStrategy::sequential();
  const IntMatrix m = randmat(256, 256, 42, seq);
  const Mask mask = thresh(m, 50, seq);
  const PointList pts = winnow(m, mask, 256, seq);
  const auto [dist, vec] = outer(pts, seq);
  for (auto _ : state) {
    benchmark::DoNotOptimize(product(dist, vec, s));
  }
}
BENCHMARK(BM_Product)->Apply(apply_strategies)->Unit(benchmark::kMicrosecond);

void BM_Chain(benchmark::State& state) {
  const ExecStrategy s = strategy_arg(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain(128, 42, 50, s));
  }
}
BENCHMARK(BM_Chain)->Apply(apply_strategies)->Unit(benchmark::kMicrosecond);

// Scheduling overhead with a trivial body: the worker pool against the
// task-per-item anti-pattern.
void BM_WorkerPoolOverhead(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint8_t> sink(n);
  for (auto _ : state) {
    worker_pool(n, 4, [&](std::size_t i) { sink[i] = static_cast<std::uint8_t>(i); });
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_WorkerPoolOverhead)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SpawnPerItemOverhead(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<std::uint8_t> sink(n);
  for (auto _ : state) {
    spawn_per_item(n, [&](std::size_t i) { sink[i] = static_cast<std::uint8_t>(i); }, 4);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SpawnPerItemOverhead)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
