#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "hagedorn/multipoly.hpp"
#include "hagedorn/oracle_grid.hpp"
#include "hagedorn/propagation.hpp"
#include "hagedorn/swanson.hpp"
#include "hagedorn/wavepacket.hpp"

namespace {

using namespace hagedorn;

std::vector<double> sample_times(int count, double stop) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = stop * i / (count - 1);
  return t;
}

void BM_PropagateSwansonConstant(benchmark::State& state) {
  const SwansonParams params(1.0, 0.5);
  const auto times = sample_times(static_cast<int>(state.range(0)), 5.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(ds_initial_frame(), RVector::Zero(2), params.hamiltonian(), times, 1.0));
  }
}
BENCHMARK(BM_PropagateSwansonConstant)->Arg(50)->Arg(200);

void BM_PropagateTimeDependent(benchmark::State& state) {
  const SwansonParams params(1.0, 0.5);
  const CMatrix h0 = params.matrix();
  const auto h = QuadraticHamiltonian::function(1, [h0](double t) { return CMatrix((1.0 + 0.1 * t) * h0); });
  const auto times = sample_times(50, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(ds_initial_frame(), RVector::Zero(2), h, times, 1.0));
}
BENCHMARK(BM_PropagateTimeDependent);

void BM_PolyRecursion(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CMatrix m = CMatrix::Constant(n, n, Complex(0.1, 0.2));
  m.diagonal().setConstant(Complex(0.3, -0.1));
  const MultiIndex alpha(n, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(poly_recursion(m, alpha));
}
BENCHMARK(BM_PolyRecursion)->Args({1, 16})->Args({2, 6})->Args({3, 3});

void BM_HagedornCoefficients(benchmark::State& state) {
  const SwansonParams params(1.0, 0.5);
  const auto s = propagate(ds_initial_frame(), RVector::Zero(2), params.hamiltonian(), {0.0, 1.0}, 1.0).back();
  const MultiIndex alpha{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(hagedorn_coefficients(s, alpha));
}
BENCHMARK(BM_HagedornCoefficients)->Arg(4)->Arg(16);

void BM_EvalExcitedGrid(benchmark::State& state) {
  const Grid grid({Axis{-12.0, 12.0, 1024}});
  const WavepacketParams p(ds_initial_frame(), RVector::Zero(2), 1.0);
  const MultiIndex alpha{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(eval_excited(p, alpha, grid));
}
BENCHMARK(BM_EvalExcitedGrid)->Arg(0)->Arg(8);

void BM_GridOracleQuarterPeriod(benchmark::State& state) {
  const SwansonParams params(1.0, 0.5);
  const Grid grid({Axis{-12.0, 12.0, 1024}});
  const DiscretizedOperator op = discretize_hamiltonian(params.matrix(), 1.0, grid);
  const CVector psi0 = eval_ground(WavepacketParams(ds_initial_frame(), RVector::Zero(2), 1.0), grid);
  const GridPropagator prop(op);
  const double t = std::numbers::pi / (2.0 * params.omega());
  for (auto _ : state) benchmark::DoNotOptimize(prop.propagate(psi0, t));
}
BENCHMARK(BM_GridOracleQuarterPeriod)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
