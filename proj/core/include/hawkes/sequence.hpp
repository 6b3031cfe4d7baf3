#pragma once

#include <vector>

#include "hawkes/kernels.hpp"

namespace hawkes {

// How the explicit kernel list extends to generations beyond it.
enum class Extension {
  kCyclic,        // repeat the list
  kTailConstant,  // repeat the last kernel
  kNull,          // no excitation past the list
};

// The generation-indexed family: baseline gamma_0 plus kernels gamma_n for
// n >= 1. Construction enforces rho = sup_n ||gamma_n|| < 1.
class KernelSequence {
 public:
  KernelSequence(Baseline baseline, std::vector<Kernel> kernels,
                 Extension extension);

  const Baseline& baseline() const { return baseline_; }
  Extension extension() const { return extension_; }
  const std::vector<Kernel>& explicit_kernels() const { return kernels_; }
  std::size_t cycle_length() const { return kernels_.size(); }

  // Kernel for generation n >= 1; nullptr when the extension makes it null.
  const Kernel* kernel_at(std::size_t n) const;
  double norm_at(std::size_t n) const;
  // Index into explicit_kernels() backing kernel_at(n); npos when null.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t explicit_index_at(std::size_t n) const;

  double rho() const { return rho_; }    // sup of L1 norms
  double eta() const { return eta_; }    // sup of first moments
  bool eta_resolved() const { return eta_resolved_; }
  bool all_have_envelopes() const;

  // Longest single-kernel truncation length at the given tail policy.
  double max_truncation_length(double eps = 1e-10) const;

 private:
  Baseline baseline_;
  std::vector<Kernel> kernels_;
  Extension extension_;
  double rho_ = 0.0;
  double eta_ = 0.0;
  bool eta_resolved_ = true;
};

}  // namespace hawkes
