#include <benchmark/benchmark.h>

#include "rsbounds/distributions.hpp"
#include "rsbounds/orthopoly.hpp"

using namespace rsbounds;

static void BM_GaussRuleLegendre(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_rule(Legendre{0.0, 1.0}, n));
}
BENCHMARK(BM_GaussRuleLegendre)->RangeMultiplier(4)->Range(8, 512);

static void BM_GaussRuleJacobi(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gauss_rule(Jacobi{4.0, 4.0, 0.0, 1.0}, n));
}
BENCHMARK(BM_GaussRuleJacobi)->RangeMultiplier(4)->Range(8, 512);

static void BM_BasisValues(benchmark::State& state) {
  const BasisEvaluator basis(Hermite{}, static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(basis.max_degree() + 1);
  double z = 0.1;
  for (auto _ : state) {
    basis.values(z, out);
    benchmark::DoNotOptimize(out.data());
    z += 1e-9;
  }
}
BENCHMARK(BM_BasisValues)->Arg(8)->Arg(32);

static void BM_RelativeEntropyNumeric(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(relative_entropy_numeric(Beta{10.0, 10.0}, Beta{5.0, 5.0}));
}
BENCHMARK(BM_RelativeEntropyNumeric);
