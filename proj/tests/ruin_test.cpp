#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "hawkes/claims.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/ruin.hpp"

namespace {

using hawkes::Baseline;
using hawkes::ClaimLaw;
using hawkes::ConstantBaseline;
using hawkes::Extension;
using hawkes::Kernel;
using hawkes::KernelSequence;
using hawkes::RiskModel;

const double kInf = std::numeric_limits<double>::infinity();

KernelSequence classical(double nu = 1.0) {
  return KernelSequence(
      Baseline{Baseline::Kind{ConstantBaseline{nu}}},
      {Kernel(Kernel::Family{hawkes::Exponential{2.0, 1.0}})},
      Extension::kTailConstant);
}

KernelSequence poisson(double nu = 1.0) {
  return KernelSequence(Baseline{Baseline::Kind{ConstantBaseline{nu}}}, {},
                        Extension::kNull);
}

TEST(Claims, MomentsAndMgf) {
  EXPECT_NEAR(ClaimLaw::pareto(1.5, 1.0).mean(), 3.0, 1e-12);
  EXPECT_NEAR(ClaimLaw::weibull(0.5, 1.0).mean(), 2.0, 1e-10);
  EXPECT_NEAR(ClaimLaw::exponential(0.5).log_mgf(0.1), 0.0512932943875506,
              1e-13);
  EXPECT_DOUBLE_EQ(ClaimLaw::deterministic(2.0).log_mgf(0.5), 1.0);
  EXPECT_TRUE(std::isinf(ClaimLaw::pareto(0.8, 1.0).mean()));
  // MGF domains
  EXPECT_NEAR(ClaimLaw::exponential(0.5).mgf_sup(), 2.0, 1e-12);
  EXPECT_TRUE(std::isinf(ClaimLaw::deterministic(1.0).mgf_sup()));
  EXPECT_EQ(ClaimLaw::pareto(1.5, 1.0).mgf_sup(), 0.0);
  EXPECT_TRUE(std::isinf(ClaimLaw::pareto(1.5, 1.0).log_mgf(0.01)));
  EXPECT_FALSE(ClaimLaw::pareto(1.5, 1.0).light_tailed());
  EXPECT_TRUE(ClaimLaw::gamma(2.0, 0.5).light_tailed());
}

TEST(Claims, QuantileAndTailAreConsistent) {
  const ClaimLaw laws[] = {
      ClaimLaw::exponential(2.0), ClaimLaw::gamma(2.0, 0.5),
      ClaimLaw::pareto(1.5, 1.0), ClaimLaw::weibull(0.5, 1.0),
      ClaimLaw::log_normal(0.0, 1.0)};
  for (const auto& law : laws) {
    for (double u : {0.1, 0.5, 0.9, 0.99}) {
      const double x = law.quantile(u);
      EXPECT_NEAR(law.tail(x), 1.0 - u, 1e-9) << law.family_name() << " " << u;
    }
  }
  EXPECT_DOUBLE_EQ(ClaimLaw::deterministic(3.0).quantile(0.7), 3.0);
}

TEST(Claims, IntegratedTailReferenceValues) {
  const auto pareto = ClaimLaw::pareto(1.5, 1.0);
  EXPECT_NEAR(pareto.integrated_tail_complement(20.0), 0.149071198499986,
              1e-12);
  EXPECT_NEAR(pareto.integrated_tail_complement(40.0), 0.105409255338946,
              1e-12);
  EXPECT_NEAR(pareto.integrated_tail_complement(80.0), 0.074535599249993,
              1e-12);
  const auto weib = ClaimLaw::weibull(0.5, 1.0);
  EXPECT_NEAR(weib.integrated_tail_complement(4.0), 0.406005849709874, 1e-9);
  // a proper survival function: 1 at 0, decreasing
  EXPECT_NEAR(pareto.integrated_tail_complement(0.0), 1.0, 1e-12);
  EXPECT_GT(weib.integrated_tail_complement(1.0),
            weib.integrated_tail_complement(2.0));
}

TEST(Claims, ParameterValidation) {
  EXPECT_THROW(ClaimLaw::exponential(-1.0), hawkes::validation_error);
  EXPECT_THROW(ClaimLaw::pareto(0.0, 1.0), hawkes::validation_error);
  EXPECT_THROW(ClaimLaw::weibull(1.5, 1.0), hawkes::validation_error);
  EXPECT_THROW(ClaimLaw::gamma(2.0, -0.5), hawkes::validation_error);
  EXPECT_THROW(ClaimLaw::log_normal(0.0, 0.0), hawkes::validation_error);
}

TEST(Ruin, RiskModelBookkeeping) {
  const RiskModel model(10.0, 3.0, ClaimLaw::deterministic(1.0), classical());
  EXPECT_NEAR(model.arrival_rate(), 2.0, 1e-10);
  EXPECT_NEAR(model.claim_load(), 2.0, 1e-10);
  EXPECT_TRUE(model.net_profit());
  const RiskModel tight(10.0, 1.5, ClaimLaw::deterministic(1.0), classical());
  EXPECT_FALSE(tight.net_profit());
}

TEST(Ruin, LundbergExponentReferenceValues) {
  const RiskModel pois(5.0, 2.0, ClaimLaw::deterministic(1.0), poisson());
  EXPECT_NEAR(lundberg_exponent(pois).theta_dagger, 1.25643120862617, 1e-9);
  const RiskModel hk(5.0, 3.0, ClaimLaw::deterministic(1.0), classical());
  EXPECT_NEAR(lundberg_exponent(hk).theta_dagger, 0.141679704915654, 1e-9);
}

TEST(Ruin, LundbergRefusesWithoutItsInequalities) {
  // premium below the load: net profit fails
  const RiskModel bad(5.0, 1.5, ClaimLaw::deterministic(1.0), classical());
  EXPECT_THROW(lundberg_exponent(bad), hawkes::validation_error);
  // heavy-tailed claims have no exponent
  const RiskModel heavy(5.0, 10.0, ClaimLaw::pareto(1.5, 1.0), classical());
  EXPECT_THROW(lundberg_exponent(heavy), hawkes::validation_error);
}

TEST(Ruin, ComposedCumulantReferenceValue) {
  const hawkes::CumulantModel model(classical());
  EXPECT_NEAR(
      gamma_C(model, ClaimLaw::exponential(0.5), 0.1), 0.114846039312259,
      1e-11);
  // composition through a finite-MGF law keeps a finite critical point
  const auto tc = composed_theta_c(model, ClaimLaw::exponential(0.5));
  EXPECT_FALSE(tc.at_cap);
  EXPECT_LT(tc.value, 2.0);  // cannot pass the claim MGF edge
  EXPECT_GT(tc.value, 0.0);
}

TEST(Ruin, KneeReferenceValues) {
  const RiskModel hk(5.0, 3.0, ClaimLaw::deterministic(1.0), classical());
  EXPECT_NEAR(ruin_knee(hk), 0.510987510681898, 1e-8);
  const RiskModel pois(5.0, 2.0, ClaimLaw::deterministic(1.0), poisson());
  EXPECT_NEAR(ruin_knee(pois), 0.66099863979449, 1e-8);
}

TEST(Ruin, FiniteHorizonRateReferenceValues) {
  const RiskModel pois(5.0, 2.0, ClaimLaw::deterministic(1.0), poisson());
  EXPECT_NEAR(finite_horizon_rate(pois, 0.2), 1.52427420867744, 1e-8);
  // the inner sup flattens out approaching the knee, so the optimizer loses
  // a few digits there
  EXPECT_NEAR(finite_horizon_rate(pois, 0.330499), 1.35129873774279, 1e-6);
  const double theta = lundberg_exponent(pois).theta_dagger;
  const double knee = ruin_knee(pois);
  // flat at theta_dagger past the knee, continuous across it
  EXPECT_NEAR(finite_horizon_rate(pois, knee + 0.5), theta, 1e-10);
  EXPECT_NEAR(finite_horizon_rate(pois, knee - 1e-5),
              finite_horizon_rate(pois, knee + 1e-5), 1e-3);
  // decreasing in z up to the knee
  EXPECT_GT(finite_horizon_rate(pois, 0.1), finite_horizon_rate(pois, 0.3));
}

TEST(Ruin, HeavyTailAsymptoteConstants) {
  const RiskModel model(20.0, 8.0, ClaimLaw::pareto(1.5, 1.0), classical());
  // load = m E[C] = 6, so the unlimited-horizon constant is 6 / (8 - 6)
  const auto all_time = heavy_tail_asymptote(model, kInf);
  EXPECT_NEAR(all_time.constant, 3.0, 1e-10);
  EXPECT_NEAR(all_time(20.0), 3.0 * 0.149071198499986, 1e-9);
  const auto finite = heavy_tail_asymptote(model, 2.0);
  EXPECT_GT(finite.constant, 0.0);
  EXPECT_LT(finite.constant, all_time.constant);
  EXPECT_LT(heavy_tail_asymptote(model, 1.0).constant, finite.constant);
}

TEST(Ruin, SimulateRuinEdgeCases) {
  const RiskModel model(5.0, 3.0, ClaimLaw::deterministic(1.0), classical());
  const auto est = simulate_ruin(model, kInf, 2000, 42);
  EXPECT_GT(est.psi, 0.0);
  EXPECT_LT(est.psi, 1.0);
  EXPECT_GT(est.se, 0.0);
  EXPECT_GT(est.horizon, 0.0);
  EXPECT_LT(est.residual_bound, 1e-2);
  // deterministic given the seed
  const auto rep = simulate_ruin(model, kInf, 2000, 42);
  EXPECT_DOUBLE_EQ(est.psi, rep.psi);

  const RiskModel rich(1e6, 3.0, ClaimLaw::deterministic(1.0), classical());
  EXPECT_DOUBLE_EQ(simulate_ruin(rich, 50.0, 200, 1).psi, 0.0);

  // no reserve: ruin whenever the first claim outruns the premium
  const RiskModel broke(0.0, 3.0, ClaimLaw::exponential(1.0), classical());
  const auto b = simulate_ruin(broke, 200.0, 2000, 9);
  EXPECT_GT(b.psi, 0.3);
}

TEST(Ruin, SimulateRuinRefusesOpenEndedHeavyTails) {
  const RiskModel heavy(10.0, 8.0, ClaimLaw::pareto(1.5, 1.0), classical());
  EXPECT_THROW(simulate_ruin(heavy, kInf, 100, 1), hawkes::validation_error);
  // finite horizon stays legal
  EXPECT_NO_THROW(simulate_ruin(heavy, 20.0, 100, 1));
  // without net profit the open-ended run cannot truncate either
  const RiskModel bad(10.0, 1.0, ClaimLaw::deterministic(1.0), classical());
  EXPECT_THROW(simulate_ruin(bad, kInf, 100, 1), hawkes::validation_error);
}

TEST(Ruin, DecaySlopeTracksLundbergExponent) {
  const RiskModel base(0.0, 3.0, ClaimLaw::deterministic(1.0), classical());
  const double theta = lundberg_exponent(base).theta_dagger;
  const int reps = 4000;
  double psi5 = 0.0, psi15 = 0.0;
  {
    const RiskModel m5(5.0, 3.0, ClaimLaw::deterministic(1.0), classical());
    psi5 = simulate_ruin(m5, kInf, reps, 11).psi;
    const RiskModel m15(15.0, 3.0, ClaimLaw::deterministic(1.0), classical());
    psi15 = simulate_ruin(m15, kInf, reps, 12).psi;
  }
  ASSERT_GT(psi5, 0.0);
  ASSERT_GT(psi15, 0.0);
  const double slope = (std::log(psi15) - std::log(psi5)) / 10.0;
  EXPECT_NEAR(slope, -theta, 0.35 * theta);
}

}  // namespace
