#include <benchmark/benchmark.h>

#include "magstab/dispersion.hpp"

using namespace magstab;

namespace {

const LayerStack kStack{{1, 1, 0.5, 0.5}, {5, 1, 0.5, 1.0}};

void BM_LayerModes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(layer_modes(kStack.upper, 0.7, 1.0));
}
BENCHMARK(BM_LayerModes);

void BM_AssembleAndDet(benchmark::State& state) {
  for (auto _ : state) {
    const BoundarySystem sys = assemble(kStack, {0.7, 1.0, 1.0});
    benchmark::DoNotOptimize(scaled_determinant(sys));
  }
}
BENCHMARK(BM_AssembleAndDet);

void BM_FindCritical(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_critical(kStack, 1.0, 1.0));
}
BENCHMARK(BM_FindCritical)->Unit(benchmark::kMillisecond);

void BM_Sweep(benchmark::State& state) {
  std::vector<SweepCase> cases;
  for (int i = 0; i < 8; ++i) cases.push_back({kStack, 1.0, 0.25 * i});
  for (auto _ : state) benchmark::DoNotOptimize(sweep(cases, {}, static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive carries LTO bytecode from another
// compiler release, so the entry point lives here.
BENCHMARK_MAIN();
