#include <benchmark/benchmark.h>

#include "photocount/fokker_planck.hpp"
#include "photocount/montecarlo.hpp"

namespace {

using namespace photocount;

const FptLaw kLaw(1.0, 1.0, 1.0);

void BM_sample_fpt_serial(benchmark::State& state) {
  const RunConfig cfg(42, 1e-3, 200.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto samples = sample_fpt_serial(kLaw, cfg, n);
    benchmark::DoNotOptimize(samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sample_fpt_serial)->Arg(1 << 10)->Arg(1 << 13)->UseRealTime();

void BM_sample_fpt_parallel(benchmark::State& state) {
  const RunConfig cfg(42, 1e-3, 200.0);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto samples = sample_fpt(kLaw, cfg, n);
    benchmark::DoNotOptimize(samples.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_sample_fpt_parallel)->Arg(1 << 10)->Arg(1 << 13)->UseRealTime();

void BM_pde_solve(benchmark::State& state) {
  const auto cells = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const PdeGrid grid(kLaw, cells, 4e-3, 2.0);
    auto sol = solve(kLaw, grid);
    benchmark::DoNotOptimize(sol.absorbed.data());
  }
}
BENCHMARK(BM_pde_solve)->Arg(512)->Arg(1024);

} // namespace

BENCHMARK_MAIN();
