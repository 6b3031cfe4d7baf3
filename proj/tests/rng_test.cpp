#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hawkes/rng.hpp"

namespace {

using hawkes::PhiloxEngine;

// Known-answer vectors for the 4x32-10 block function (checked against the
// reference implementation of the Random123 suite).
TEST(Rng, BlockZeroInput) {
  const auto w = PhiloxEngine::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(w[0], 0x6627E8D5u);
  EXPECT_EQ(w[1], 0xE169C58Du);
  EXPECT_EQ(w[2], 0xBC57AC4Cu);
  EXPECT_EQ(w[3], 0x9B00DBD8u);
}

TEST(Rng, BlockAllOnes) {
  const auto w = PhiloxEngine::block(
      {0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu, 0xFFFFFFFFu},
      {0xFFFFFFFFu, 0xFFFFFFFFu});
  EXPECT_EQ(w[0], 0x408F276Du);
  EXPECT_EQ(w[1], 0x41C83B0Eu);
  EXPECT_EQ(w[2], 0xA20BC7C6u);
  EXPECT_EQ(w[3], 0x6D5451FDu);
}

TEST(Rng, BlockMixedInput) {
  const auto w = PhiloxEngine::block(
      {0x12345678u, 0x9ABCDEF0u, 0xDEADBEEFu, 0xCAFEBABEu},
      {0x0BADF00Du, 0x1BADB002u});
  EXPECT_EQ(w[0], 0xD9F4E59Eu);
  EXPECT_EQ(w[1], 0xEF18BD02u);
  EXPECT_EQ(w[2], 0x50D366CFu);
  EXPECT_EQ(w[3], 0xD79BC6CBu);
}

TEST(Rng, UniformSequenceSeededStream) {
  PhiloxEngine eng(0x0123456789ABCDEFull, 7);
  const double expected[] = {
      0.20584454935921398, 0.99120444190953161, 0.97514940917506521,
      0.24522217683768793, 0.41351702004555507, 0.62560506146669193,
      0.20689577489475436, 0.50343206763335013};
  for (double e : expected) EXPECT_DOUBLE_EQ(eng.uniform(), e);
}

TEST(Rng, UniformSequenceSeedOne) {
  PhiloxEngine eng(1, 0);
  const double expected[] = {0.89025917297571078, 0.58572594838013603,
                             0.67199826889534298, 0.47559322595039927};
  for (double e : expected) EXPECT_DOUBLE_EQ(eng.uniform(), e);
}

TEST(Rng, StreamsAreIndependentOfConstructionOrder) {
  PhiloxEngine a(42, 3);
  const double first = a.uniform();
  // constructing other streams in between must not disturb stream 3
  PhiloxEngine b(42, 1);
  (void)b.uniform();
  PhiloxEngine c(42, 3);
  EXPECT_DOUBLE_EQ(c.uniform(), first);
}

TEST(Rng, UniformStaysInsideOpenInterval) {
  PhiloxEngine eng(987654321, 11);
  for (int i = 0; i < 20000; ++i) {
    const double u = eng.uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, ExponentialMatchesMean) {
  PhiloxEngine eng(5, 0);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += eng.exponential(2.0);
  // mean 0.5, sd 0.5 => 5 sigma band
  EXPECT_NEAR(sum / n, 0.5, 5.0 * 0.5 / std::sqrt(static_cast<double>(n)));
}

TEST(Rng, PoissonMatchesMeanAndVariance) {
  PhiloxEngine eng(6, 0);
  const int n = 100000;
  const double mean = 0.8;
  double sum = 0.0;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double k = eng.poisson(mean);
    sum += k;
    ss += k * k;
  }
  const double mhat = sum / n;
  const double vhat = ss / n - mhat * mhat;
  EXPECT_NEAR(mhat, mean, 5.0 * std::sqrt(mean / n));
  EXPECT_NEAR(vhat, mean, 0.05);
}

TEST(Rng, PoissonZeroMean) {
  PhiloxEngine eng(7, 0);
  EXPECT_EQ(eng.poisson(0.0), 0);
  EXPECT_EQ(eng.poisson(-1.0), 0);
}

TEST(Rng, PoissonRejectsHugeMean) {
  PhiloxEngine eng(8, 0);
  EXPECT_THROW(eng.poisson(200.0), hawkes::numerical_error);
}

}  // namespace
