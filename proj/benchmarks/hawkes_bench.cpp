#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "hawkes/deviations.hpp"
#include "hawkes/grid.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/microstructure.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/sequence.hpp"
#include "hawkes/simulate.hpp"

namespace {

using namespace hawkes;

KernelSequence classical() {
  return KernelSequence(Baseline(ConstantBaseline{1.0}),
                        {Kernel(Exponential{2.0, 1.0})},
                        Extension::kTailConstant);
}

KernelSequence even_odd() {
  return KernelSequence(
      Baseline(ConstantBaseline{2.0}),
      {Kernel(Exponential{2.0, 1.0}), Kernel(Exponential{2.0, 0.5})},
      Extension::kCyclic);
}

void BM_SimulateBranching(benchmark::State& state) {
  const KernelSequence seq = classical();
  const double T = static_cast<double>(state.range(0));
  std::uint64_t stream = 0;
  std::size_t events = 0;
  for (auto _ : state) {
    const EventLog log = simulate_branching(seq, T, RngStream{17, stream++}, 1e-10);
    events += log.count();
    benchmark::DoNotOptimize(log.events.data());
  }
  state.counters["events/s"] = benchmark::Counter(
      static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateBranching)->Arg(100)->Arg(400);

void BM_SimulateThinning(benchmark::State& state) {
  const KernelSequence seq = classical();
  const double T = static_cast<double>(state.range(0));
  std::uint64_t stream = 0;
  std::size_t events = 0;
  for (auto _ : state) {
    const EventLog log = simulate_thinning(seq, T, RngStream{18, stream++}, 80);
    events += log.count();
    benchmark::DoNotOptimize(log.events.data());
  }
  state.counters["events/s"] = benchmark::Counter(
      static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_SimulateThinning)->Arg(100)->Arg(400);

// direct vs FFT paths of the trapezoid convolution (the engine switches on
// the product of lengths)
void BM_Convolve(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  GridFunction f;
  f.dt = 1e-3;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    f.values[i] = std::exp(-2.0 * f.dt * static_cast<double>(i));
  for (auto _ : state) {
    const GridFunction out = convolve(f, f);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_Convolve)->RangeMultiplier(4)->Range(1 << 8, 1 << 16)->Complexity();

void BM_Correlate(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  GridFunction f;
  f.dt = 1e-3;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    f.values[i] = std::exp(-1.0 * f.dt * static_cast<double>(i));
  for (auto _ : state) {
    const TwoSidedGrid out = correlate(f, f);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(BM_Correlate)->RangeMultiplier(4)->Range(1 << 8, 1 << 16);

void BM_CumulantGamma(benchmark::State& state) {
  const KernelSequence seq = even_odd();
  for (auto _ : state) {
    // fresh model so the memoized cache cannot short-circuit the recursion
    const CumulantModel model(seq, 1e-12);
    double acc = 0.0;
    for (int k = -4; k <= 4; ++k) acc += model.gamma(0.04 * k);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_CumulantGamma);

void BM_CovarianceTable(benchmark::State& state) {
  const KernelSequence seq = even_odd();
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const CovarianceTable table = covariance_table(seq, n_max, 2e-3, 24.0);
    benchmark::DoNotOptimize(table.value(0, 1, 0.5));
  }
}
BENCHMARK(BM_CovarianceTable)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
