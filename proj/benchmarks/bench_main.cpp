#include <factorstab/criteria.hpp>
#include <factorstab/numkernel.hpp>
#include <factorstab/simgen.hpp>
#include <factorstab/stability.hpp>

#include <benchmark/benchmark.h>

using namespace factorstab;

namespace {

DataMatrix dataset(Index n, Index p) {
  SimulationConfig cfg;
  cfg.n = n;
  cfg.p = p;
  return simulate_dataset(cfg).x;
}

void BM_CovEigsDirect(benchmark::State& state) {
  const DataMatrix x = dataset(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cov_eigs_direct(x, 10));
}

void BM_CovEigsGram(benchmark::State& state) {
  const DataMatrix x = dataset(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cov_eigs_gram(x, 10));
}

void BM_SampleSpectrum(benchmark::State& state) {
  const DataMatrix x = dataset(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sample_spectrum(x, 10));
}

void BM_InsCurve(benchmark::State& state) {
  const DataMatrix x = dataset(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ins_curve(x, 10, 10, 1));
}

void BM_DirectedSine(benchmark::State& state) {
  const Index p = state.range(0);
  Rng rng(3);
  const SubspaceBasis u(random_orthonormal(p, 10, rng));
  const SubspaceBasis v(random_orthonormal(p, 10, rng));
  for (auto _ : state) benchmark::DoNotOptimize(directed_sin_angle(u, v));
}

void BM_Simulate(benchmark::State& state) {
  SimulationConfig cfg;
  cfg.n = state.range(0);
  cfg.p = state.range(1);
  cfg.scenario = state.range(2) ? ErrorScenario::S2 : ErrorScenario::S1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_dataset(cfg));
}

}  // namespace

BENCHMARK(BM_CovEigsDirect)->Args({250, 250})->Args({250, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CovEigsGram)->Args({250, 250})->Args({250, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleSpectrum)->Args({500, 250})->Args({500, 650})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InsCurve)->Args({500, 250})->Args({500, 500})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DirectedSine)->Arg(500)->Arg(2000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Simulate)->Args({500, 500, 0})->Args({500, 500, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
