#include <benchmark/benchmark.h>

#include "milnebands/milnebands.hpp"

using namespace milnebands;

static void BM_CellQuantities(benchmark::State& state) {
  const SolverSettings s;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell_quantities(-1.25, -0.76, kDefaultMass, s).discriminant());
  }
}
BENCHMARK(BM_CellQuantities);

static void BM_TotalPhase(benchmark::State& state) {
  const SolverSettings s;
  const Potential pot(-1.35, -1.25, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(total_phase(-0.78, pot, s).phi);
}
BENCHMARK(BM_TotalPhase)->Arg(2)->Arg(4)->Arg(6);

static void BM_FindLevels(benchmark::State& state) {
  const SolverSettings s;
  const Potential pot(-1.35, -1.25, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_levels(pot, s).size());
}
BENCHMARK(BM_FindLevels)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_FdSpectrum(benchmark::State& state) {
  const Potential pot(-1.25, -1.25, 4);
  const FdGrid grid = FdGrid::padded(pot, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fd_spectrum(pot, grid, 8).size());
}
BENCHMARK(BM_FdSpectrum)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
