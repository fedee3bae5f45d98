#include <benchmark/benchmark.h>

#include "ddecoh/kernel.hpp"
#include "ddecoh/oracle.hpp"
#include "ddecoh/spectral.hpp"
#include "ddecoh/volterra.hpp"

using namespace ddecoh;

namespace {

const Semicircle kUnit{1.0, 0.0, 1.0};

void BM_Evolve(benchmark::State& state) {
  const double t_max = static_cast<double>(state.range(0));
  const auto k = MemoryKernel::analytic(kUnit);
  const DrivingField d{2.5, 1.25, Sine{0.5}};
  const auto g = TimeGrid::span(0.0, t_max, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(k, 0.0, d, g));
  state.SetComplexityN(static_cast<int64_t>(g.n_steps));
}
BENCHMARK(BM_Evolve)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->Complexity();

void BM_OraclePropagate(benchmark::State& state) {
  const auto m = discretize(kUnit, static_cast<std::size_t>(state.range(0)), 0.0);
  const DrivingField d{2.5, 1.25, Sine{0.5}};
  const auto g = TimeGrid::span(0.0, 20.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(m, d, g));
}
BENCHMARK(BM_OraclePropagate)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_KernelQuadrature(benchmark::State& state) {
  const double s = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel_quadrature(kUnit, s));
}
BENCHMARK(BM_KernelQuadrature)->Arg(1)->Arg(50)->Arg(200);

void BM_U0(benchmark::State& state) {
  const auto g = TimeGrid::span(0.0, 200.0, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(compute_u0(kUnit, 2.5, g));
}
BENCHMARK(BM_U0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
