#include "hawkes/sequence.hpp"

#include <algorithm>
#include <sstream>

#include "hawkes/errors.hpp"

namespace hawkes {

KernelSequence::KernelSequence(Baseline baseline, std::vector<Kernel> kernels,
                               Extension extension)
    : baseline_(std::move(baseline)),
      kernels_(std::move(kernels)),
      extension_(extension) {
  if (kernels_.empty() && extension_ != Extension::kNull)
    throw validation_error(
        "KernelSequence: cyclic/tail-constant extension needs at least one "
        "kernel");
  for (std::size_t i = 0; i < kernels_.size(); ++i) {
    const double norm = kernels_[i].l1_norm();
    if (norm >= 1.0) {
      std::ostringstream msg;
      msg << "KernelSequence: kernel " << (i + 1) << " ("
          << kernels_[i].family_name() << ") has L1 norm " << norm
          << " >= 1; the branching ratio rho must stay below 1";
      throw stability_error(msg.str());
    }
    rho_ = std::max(rho_, norm);
    eta_ = std::max(eta_, kernels_[i].first_moment());
    eta_resolved_ = eta_resolved_ && kernels_[i].first_moment_resolved();
  }
}

const Kernel* KernelSequence::kernel_at(std::size_t n) const {
  std::size_t idx = explicit_index_at(n);
  return idx == npos ? nullptr : &kernels_[idx];
}

std::size_t KernelSequence::explicit_index_at(std::size_t n) const {
  if (n == 0 || kernels_.empty()) return npos;
  if (n <= kernels_.size()) return n - 1;
  switch (extension_) {
    case Extension::kCyclic:
      return (n - 1) % kernels_.size();
    case Extension::kTailConstant:
      return kernels_.size() - 1;
    case Extension::kNull:
      return npos;
  }
  return npos;
}

double KernelSequence::norm_at(std::size_t n) const {
  const Kernel* k = kernel_at(n);
  return k ? k->l1_norm() : 0.0;
}

bool KernelSequence::all_have_envelopes() const {
  return std::all_of(kernels_.begin(), kernels_.end(),
                     [](const Kernel& k) { return k.has_envelope(); });
}

double KernelSequence::max_truncation_length(double eps) const {
  double len = 0.0;
  for (const auto& k : kernels_)
    len = std::max(len, k.truncation_length(eps));
  return len;
}

}  // namespace hawkes
