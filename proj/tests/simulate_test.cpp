#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "hawkes/analytics.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/stats.hpp"

namespace {

using hawkes::Baseline;
using hawkes::ConstantBaseline;
using hawkes::EventLog;
using hawkes::Extension;
using hawkes::Kernel;
using hawkes::KernelSequence;
using hawkes::RngStream;

Kernel expk(double rate, double weight) {
  return Kernel(Kernel::Family{hawkes::Exponential{rate, weight}});
}

KernelSequence classical(double nu = 1.0) {
  return KernelSequence(Baseline{Baseline::Kind{ConstantBaseline{nu}}},
                        {expk(2.0, 1.0)}, Extension::kTailConstant);
}

KernelSequence poisson_only(double nu) {
  return KernelSequence(Baseline{Baseline::Kind{ConstantBaseline{nu}}}, {},
                        Extension::kNull);
}

TEST(Simulate, PoissonCountsMatchMean) {
  const auto seq = poisson_only(1.0);
  const double T = 100.0;
  const int reps = 200;
  double sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto log = simulate_branching(seq, T, RngStream{11, static_cast<std::uint64_t>(r)}, 1e-10);
    log.validate();
    sum += static_cast<double>(log.count());
    EXPECT_EQ(log.truncation_generation, 0);
  }
  const double mhat = sum / reps;
  // sd of the replicate mean: sqrt(100/200)
  EXPECT_NEAR(mhat, 100.0, 4.0 * std::sqrt(100.0 / reps));
}

TEST(Simulate, BranchingIsBitwiseDeterministic) {
  const auto seq = classical();
  const auto a = simulate_branching(seq, 50.0, RngStream{123, 5}, 1e-8);
  const auto b = simulate_branching(seq, 50.0, RngStream{123, 5}, 1e-8);
  ASSERT_EQ(a.count(), b.count());
  for (std::size_t i = 0; i < a.count(); ++i) {
    EXPECT_EQ(a.events[i].time, b.events[i].time);
    EXPECT_EQ(a.events[i].generation, b.events[i].generation);
  }
  const auto c = simulate_branching(seq, 50.0, RngStream{123, 6}, 1e-8);
  EXPECT_NE(a.count(), c.count());
}

TEST(Simulate, ThinningIsBitwiseDeterministic) {
  const auto seq = classical();
  const auto a = simulate_thinning(seq, 50.0, RngStream{77, 2}, 30);
  const auto b = simulate_thinning(seq, 50.0, RngStream{77, 2}, 30);
  ASSERT_EQ(a.count(), b.count());
  for (std::size_t i = 0; i < a.count(); ++i)
    EXPECT_EQ(a.events[i].time, b.events[i].time);
}

TEST(Simulate, BranchingLogValidates) {
  const auto seq = KernelSequence(
      Baseline{Baseline::Kind{ConstantBaseline{2.0}}},
      {expk(2.0, 1.0), expk(1.0, 0.25)}, Extension::kCyclic);
  const auto log = simulate_branching(seq, 200.0, RngStream{9, 0}, 1e-10);
  log.validate();
  EXPECT_GT(log.count(), 0u);
  EXPECT_LE(log.truncation_bound, 1e-10);
  // generation populations decay roughly geometrically
  const auto gc = log.generation_counts();
  ASSERT_GE(gc.size(), 2u);
  EXPECT_GT(gc[0], gc.back());
}

TEST(Simulate, ThinningRespectsGenerationCap) {
  const auto seq = classical(2.0);
  const auto log = simulate_thinning(seq, 100.0, RngStream{31, 1}, 1);
  log.validate();
  for (const auto& e : log.events) EXPECT_LE(e.generation, 1);
  EXPECT_GT(log.count(), 0u);
}

TEST(Simulate, FirstGenerationMeanMatchesQuadrature) {
  // thinning capped at generation 1: mean count is nu*T plus the smoothed
  // kernel mass sum_{s<T} int_0^{T-s} gamma_1
  const auto seq = classical(1.0);
  const double T = 50.0;
  const int reps = 300;
  std::vector<double> counts(reps);
  for (int r = 0; r < reps; ++r) {
    const auto log =
        simulate_thinning(seq, T, RngStream{2024, static_cast<std::uint64_t>(r)}, 1);
    counts[static_cast<std::size_t>(r)] = static_cast<double>(log.count());
  }
  const Kernel k = expk(2.0, 1.0);
  // E = nu T + nu int_0^T cdf_mass(T - s) ds, exact for the exponential
  double excited = 0.0;
  {
    const int n = 200000;
    const double h = T / n;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 0.5 : 1.0;
      excited += w * k.cdf_mass(T - i * h) * h;
    }
  }
  const double want = T + excited;
  const double mhat = hawkes::stats::mean(counts);
  const double se =
      std::sqrt(hawkes::stats::sample_variance(counts) / reps);
  EXPECT_NEAR(mhat, want, 4.0 * se);
}

TEST(Simulate, BranchingMeanMatchesConvolutionSeries) {
  const auto seq = classical(1.0);
  const double T = 50.0;
  const int reps = 300;
  std::vector<double> counts(reps);
  for (int r = 0; r < reps; ++r) {
    const auto log = simulate_branching(
        seq, T, RngStream{606, static_cast<std::uint64_t>(r)}, 1e-10);
    counts[static_cast<std::size_t>(r)] = static_cast<double>(log.count());
  }
  const double want = hawkes::mean_count(seq, T, 1e-3);
  const double mhat = hawkes::stats::mean(counts);
  const double se = std::sqrt(hawkes::stats::sample_variance(counts) / reps);
  EXPECT_NEAR(mhat, want, 4.0 * se);
}

TEST(Simulate, BranchingAndThinningAgreeInDistribution) {
  const auto seq = KernelSequence(
      Baseline{Baseline::Kind{ConstantBaseline{1.0}}},
      {expk(2.0, 1.0), expk(1.0, 0.25)}, Extension::kCyclic);
  const double T = 50.0;
  const int reps = 200;
  std::vector<double> a(reps), b(reps);
  for (int r = 0; r < reps; ++r) {
    a[static_cast<std::size_t>(r)] = static_cast<double>(
        simulate_branching(seq, T, RngStream{1, static_cast<std::uint64_t>(r)}, 1e-8)
            .count());
    b[static_cast<std::size_t>(r)] = static_cast<double>(
        simulate_thinning(seq, T, RngStream{2, static_cast<std::uint64_t>(r)}, 60)
            .count());
  }
  const auto ks = hawkes::stats::ks_two_sample(a, b);
  EXPECT_GT(ks.p_value, 1e-3);
}

TEST(Simulate, ReplicateUsesSequentialStreams) {
  const auto seq = classical();
  const auto rs = replicate(seq, 20.0, 1e-9, 99, 5);
  ASSERT_EQ(rs.size(), 5u);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_EQ(rs[i].stream, i);
    std::size_t acc = 0;
    for (auto c : rs[i].per_generation) acc += c;
    EXPECT_EQ(acc, rs[i].total);
  }
  // matches a direct run on the same stream
  const auto direct = simulate_branching(seq, 20.0, RngStream{99, 3}, 1e-9);
  EXPECT_EQ(rs[3].total, direct.count());
}

TEST(Simulate, ValidateCatchesCorruption) {
  EventLog log;
  log.horizon = 10.0;
  log.events = {{3.0, 0}, {2.0, 0}};
  EXPECT_THROW(log.validate(), hawkes::numerical_error);
  log.events = {{2.0, 0}, {3.0, 2}};  // generation 2 without a generation 1
  EXPECT_THROW(log.validate(), hawkes::numerical_error);
  log.events = {{2.0, 0}, {12.0, 0}};  // beyond the horizon
  EXPECT_THROW(log.validate(), hawkes::numerical_error);
  log.events = {{2.0, 0}, {3.0, 1}, {3.5, 2}};
  log.validate();
}

TEST(Simulate, CsvUsesNineDecimals) {
  EventLog log;
  log.horizon = 1.0;
  log.events = {{0.123456789123, 0}, {0.5, 1}};
  std::ostringstream os;
  log.write_csv(os);
  EXPECT_EQ(os.str(), "time,generation\n0.123456789,0\n0.500000000,1\n");
}

}  // namespace
