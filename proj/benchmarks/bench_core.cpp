#include "divroot/flow.hpp"
#include "divroot/random.hpp"
#include "divroot/thermo.hpp"

#include <benchmark/benchmark.h>

using namespace divroot;

static void BM_Multiply(benchmark::State& state) {
  const Algebra a = algebra_from_dimension(static_cast<int>(state.range(0)));
  Rng rng(1);
  const Element x = random_element(a, rng), y = random_element(a, rng);
  for (auto _ : state) benchmark::DoNotOptimize(x * y);
}
BENCHMARK(BM_Multiply)->Arg(2)->Arg(4)->Arg(8);

static void BM_EvaluateJacobian(benchmark::State& state) {
  Rng rng(2);
  std::vector<Element> c;
  for (int k = 0; k <= state.range(0); ++k) c.push_back(random_element(Algebra::Octonion, rng));
  const Polynomial p(Algebra::Octonion, c);
  const Element x = random_element(Algebra::Octonion, rng, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(p, x));
    benchmark::DoNotOptimize(jacobian(p, x));
  }
}
BENCHMARK(BM_EvaluateJacobian)->Arg(2)->Arg(6);

static void BM_CollapseFlow(benchmark::State& state) {
  const Deformation d = Deformation::standard_benchmark();
  FlowConfig cfg;
  cfg.record_samples = false;
  for (auto _ : state) benchmark::DoNotOptimize(collapse_time(d, 0.2, cfg, 1));
}
BENCHMARK(BM_CollapseFlow)->Unit(benchmark::kMillisecond);

static void BM_MetropolisSteps(benchmark::State& state) {
  const Polynomial p = Polynomial::central(Algebra::Octonion, {1, 0, 1});
  GibbsConfig cfg;
  cfg.chains = 1;
  cfg.steps = 10'000;
  for (auto _ : state) benchmark::DoNotOptimize(sample_gibbs(p, cfg).stats.mean_v);
  state.SetItemsProcessed(state.iterations() * cfg.steps);
}
BENCHMARK(BM_MetropolisSteps)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
