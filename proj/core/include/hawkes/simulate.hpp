#pragma once

#include <cstdint>
#include <vector>

#include "hawkes/event_log.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/sequence.hpp"

namespace hawkes {

// Maximum generation depth before the branching construction refuses the
// requested tolerance.
inline constexpr int kMaxGenerationCap = 10000;

// Cluster/branching construction: immigrants from gamma_0, then each
// generation-(n-1) point spawns Poisson(int_0^{T-tau} gamma_n) children
// placed by the truncated inverse CDF. Generations stop at the smallest M
// whose residual bound mean_rate*T*rho^{M+1}/(1-rho) drops below tol.
EventLog simulate_branching(const KernelSequence& seq, double T,
                            const RngStream& rng, double tol);

// Ogata-style thinning on the aggregate intensity with per-kernel
// non-increasing envelopes; generations labeled by sampling the intensity
// proportions at acceptance. Only generations <= max_gen are produced.
EventLog simulate_thinning(const KernelSequence& seq, double T,
                           const RngStream& rng, int max_gen);

struct ReplicateSummary {
  std::uint64_t stream = 0;
  std::size_t total = 0;
  std::vector<std::size_t> per_generation;
  double truncation_bound = 0.0;
};

// n_reps independent branching runs on streams 0..n_reps-1.
std::vector<ReplicateSummary> replicate(const KernelSequence& seq, double T,
                                        double tol, std::uint64_t seed,
                                        int n_reps);

}  // namespace hawkes
