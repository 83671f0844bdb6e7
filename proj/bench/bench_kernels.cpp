// Serial reference vs OpenMP kernel for count collection and hierarchy training.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "hxrl/collect.hpp"
#include "hxrl/hierarchy.hpp"
#include "hxrl/oracle.hpp"

namespace {

using namespace hxrl;

const GridConfig& layout() {
  static const GridConfig g = default_layout();
  return g;
}

void bm_collect_serial(benchmark::State& state) {
  const FixedPolicy policy = uniform_policy(layout());
  const TaskSpec& task = default_tasks()[1];
  const auto episodes = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(collect_counts_serial(policy, task, layout(), episodes, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void bm_collect_parallel(benchmark::State& state) {
  const FixedPolicy policy = uniform_policy(layout());
  const TaskSpec& task = default_tasks()[1];
  const auto episodes = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(collect_counts(policy, task, layout(), episodes, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
  state.counters["threads"] = omp_get_max_threads();
}

void bm_train_serial(benchmark::State& state) {
  const auto tasks = default_tasks();
  for (auto _ : state)
    benchmark::DoNotOptimize(train_all_serial(layout(), tasks, Hyperparams::defaults_for(BackendKind::Tabular)));
}

void bm_train_parallel(benchmark::State& state) {
  const auto tasks = default_tasks();
  for (auto _ : state)
    benchmark::DoNotOptimize(train_all(layout(), tasks, Hyperparams::defaults_for(BackendKind::Tabular)));
  state.counters["threads"] = omp_get_max_threads();
}

BENCHMARK(bm_collect_serial)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_collect_parallel)->Arg(1 << 14)->Arg(1 << 17)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_train_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_train_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
