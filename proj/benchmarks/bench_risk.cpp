#include <benchmark/benchmark.h>

#include <cmath>

#include "rsbounds/riskbounds.hpp"
#include "rsbounds/surrogate.hpp"

using namespace rsbounds;

namespace {

double indicator_decay(double z1, double z2) {
  const double u = z2 * std::exp(-z1);
  return (u >= 0.8 && u <= 1.0) ? 1.0 : 0.0;
}

const RiskConfig& config(std::size_t order) {
  static const RiskConfig cfg =
      RiskConfig::from_laws(indicator_decay, Uniform{0.0, 1.0}, Uniform{0.0, 1.0}, order, order);
  return cfg;
}

}  // namespace

static void BM_TabulateRiskConfig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RiskConfig::from_laws(indicator_decay, Uniform{0.0, 1.0}, Uniform{0.0, 1.0}, n, n));
  }
}
BENCHMARK(BM_TabulateRiskConfig)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Lambda(benchmark::State& state) {
  const RiskConfig& cfg = config(256);
  const auto form = static_cast<RiskForm>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_form(cfg, form, 5.0));
}
BENCHMARK(BM_Lambda)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

static void BM_OptimalC(benchmark::State& state) {
  const RiskConfig& cfg = config(256);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_c(cfg, RiskForm::Hybrid1, 0.0484));
}
BENCHMARK(BM_OptimalC)->Unit(benchmark::kMillisecond);

static void BM_SurrogateBuild(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Model model(DecayParams{}, IndicatorOutput{0.8, 1.0});
  const std::array<PolynomialFamily, 2> fam{Legendre{0.0, 1.0}, Legendre{0.0, 1.0}};
  for (auto _ : state) benchmark::DoNotOptimize(build_output_evaluator(model, fam, {n, n}, SurrogateTarget::State));
}
BENCHMARK(BM_SurrogateBuild)->Arg(8)->Arg(12)->Arg(24);

static void BM_SurrogateEvaluate(benchmark::State& state) {
  const Model model(DecayParams{}, IdentityOutput{});
  const std::array<PolynomialFamily, 2> fam{Legendre{0.0, 1.0}, Legendre{0.0, 1.0}};
  const ModelFunction f = build_output_evaluator(model, fam, {12, 12}, SurrogateTarget::Output);
  double z = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f(z, 0.7));
    z = z < 0.9 ? z + 1e-7 : 0.1;
  }
}
BENCHMARK(BM_SurrogateEvaluate);
