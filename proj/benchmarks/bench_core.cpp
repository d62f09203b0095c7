#include <benchmark/benchmark.h>

#include "ncsigma/heisenberg_module.hpp"
#include "ncsigma/sigma_models.hpp"
#include "ncsigma/symmetry.hpp"

using namespace ncsigma;

namespace {

constexpr double kTheta = 0.2;

void BM_Mul(benchmark::State& state) {
  const int box = static_cast<int>(state.range(0));
  const auto a = random_element(kTheta, box, 1);
  const auto b = random_element(kTheta, box, 2);
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
  state.SetComplexityN(box);
}
BENCHMARK(BM_Mul)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void BM_Ad(benchmark::State& state) {
  const auto x = random_element(kTheta, 16, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ad({2, -1}, x));
}
BENCHMARK(BM_Ad);

void BM_ChiralEnergy(benchmark::State& state) {
  const auto u = exp_i(random_selfadjoint(kTheta, 4, 5), 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(chiral_energy(u));
}
BENCHMARK(BM_ChiralEnergy);

void BM_Instanton(benchmark::State& state) {
  const int box = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(instanton(kTheta, 0.0, Tolerance{}, box, false));
}
BENCHMARK(BM_Instanton)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
