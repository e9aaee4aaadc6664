#include <benchmark/benchmark.h>

#include "rsbounds/models.hpp"

using namespace rsbounds;

static void BM_Oscillator(benchmark::State& state) {
  OscillatorParams p;
  p.step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oscillator_solution(0.5, 0.5, p.t_critical, p));
}
BENCHMARK(BM_Oscillator)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_Heat(benchmark::State& state) {
  HeatParams p;
  p.t_final = 1.5e-3;
  p.n_x = static_cast<int>(state.range(0));
  p.n_t = 300;
  for (auto _ : state) benchmark::DoNotOptimize(heat1d_solution(0.004, 0.355, {p.t_final, 0.0}, p));
}
BENCHMARK(BM_Heat)->Arg(96)->Arg(192)->Unit(benchmark::kMicrosecond);
