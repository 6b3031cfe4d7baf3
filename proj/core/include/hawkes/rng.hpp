#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "hawkes/errors.hpp"

namespace hawkes {

// Philox4x32-10 counter-based generator. Each (seed, stream) pair is an
// independent sequence; blocks are indexed by a 64-bit counter, so streams
// can be handed to replications in any order with identical results.
class PhiloxEngine {
 public:
  explicit PhiloxEngine(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint64_t stream() const { return stream_; }

  // Raw 4x32 block for a given counter; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(
      std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = kMul0 * static_cast<std::uint64_t>(ctr[0]);
      const std::uint64_t p1 = kMul1 * static_cast<std::uint64_t>(ctr[2]);
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  // Uniform on (0,1), 53-bit mantissa, never exactly 0 or 1.
  double uniform() {
    if (phase_ > 1) refill();
    return buf_[phase_++];
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  // Poisson by Knuth inversion; intended for small means (offspring counts
  // have mean below rho < 1; baseline arrivals use exponential gaps).
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 80.0)
      throw numerical_error("poisson(): mean too large for inversion");
    const double limit = std::exp(-mean);
    int k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  void refill() {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32)};
    const auto w = block(ctr, key_);
    const std::uint64_t x0 =
        (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    const std::uint64_t x1 =
        (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
    buf_[0] = (static_cast<double>(x0 >> 11) + 0.5) * 0x1.0p-53;
    buf_[1] = (static_cast<double>(x1 >> 11) + 0.5) * 0x1.0p-53;
    ++block_;
    phase_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  int phase_ = 2;  // 2 => buffer exhausted
  std::array<double, 2> buf_{};
};

// (seed, stream) handle used by the simulators.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  PhiloxEngine engine() const { return PhiloxEngine(seed, stream); }
};

}  // namespace hawkes
