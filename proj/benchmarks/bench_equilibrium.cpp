#include <benchmark/benchmark.h>

#include <cmath>

#include "cournot/equilibrium.hpp"
#include "cournot/experiments.hpp"

using namespace cournot;

namespace {

const PriceCurve kLinear = PriceCurve::linear(1.0, -1.0);

void BM_StochasticNormal(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MarketInstance inst(kLinear, CapacityModel{BaseDistribution::normal(1.1, 1.0), {}, {}, n},
                            nearest_divisor(n, std::sqrt(double(n))));
  for (auto _ : state) benchmark::DoNotOptimize(stochastic_symmetric_eq(inst).x_group);
}
BENCHMARK(BM_StochasticNormal)->RangeMultiplier(16)->Range(16, 65536);

void BM_StochasticIrwinHall(benchmark::State& state) {
  const MarketInstance inst(kLinear, CapacityModel{BaseDistribution::uniform(0.0, 2.2), {}, {}, 900}, 30);
  for (auto _ : state) benchmark::DoNotOptimize(stochastic_symmetric_eq(inst).x_group);
}
BENCHMARK(BM_StochasticIrwinHall);

void BM_EmpiricalAggregateBuild(benchmark::State& state) {
  const CapacityModel model{BaseDistribution::uniform(0.0, 2.2), {}, {}, 4096};
  const AggregateSettings settings{static_cast<std::size_t>(state.range(0)), 30};
  for (auto _ : state) benchmark::DoNotOptimize(group_aggregate(model, 64, 1, settings).mean());
}
BENCHMARK(BM_EmpiricalAggregateBuild)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_StochasticEmpirical(benchmark::State& state) {
  SolverSettings s;
  s.mc_samples = 200000;
  const MarketInstance inst(kLinear, CapacityModel{BaseDistribution::uniform(0.0, 2.2), {}, {}, 4096}, 64,
                            PenaltySpec::linear(), s);
  for (auto _ : state) benchmark::DoNotOptimize(stochastic_symmetric_eq(inst).x_group);
}
BENCHMARK(BM_StochasticEmpirical);

void BM_BestResponseDynamics(benchmark::State& state) {
  const MarketInstance inst(kLinear, CapacityModel{BaseDistribution::normal(1.1, 1.0), {}, {}, 100}, 10);
  const std::vector<double> init(10, 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(best_response_dynamics(inst, init).rounds);
}
BENCHMARK(BM_BestResponseDynamics)->Unit(benchmark::kMillisecond);

void BM_SweepExampleOne(benchmark::State& state) {
  SweepPlan plan;
  plan.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(plan).size());
}
BENCHMARK(BM_SweepExampleOne)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
