#pragma once

// Sparse signaling: the weight set A = {w : |q - w/n| ≤ ϑ}, its probability
// under i.i.d. Bernoulli(q) patterns, the warden's exact n-use state, and the
// terms of the exact decomposition
//   D(ρ^{Wⁿ}‖ρ₀^{⊗n}) = D(ρ̄^{⊗n}‖ρ₀^{⊗n}) + [S(ρ̄^{⊗n}) - S(ρ^{Wⁿ})]
//                       + tr[(ρ̄^{⊗n} - ρ^{Wⁿ}) log ρ₀^{⊗n}],
// with ρ̄ = (1 - q)ρ₀ + qρ_π.
//
// Sums over patterns x ∈ A are grouped by weight class: p_X depends on x only
// through w(x), so this is exact.

#include <cstdint>
#include <optional>
#include <vector>

#include "covertq/channels.hpp"

namespace covertq::sparse {

class SparseSignalConfig {
 public:
  /// Requires n ≥ 1, q ∈ (0, 1), ϑ ∈ (0, 1] and a non-empty weight set.
  SparseSignalConfig(std::size_t n, double q, double vartheta);

  std::size_t n() const { return n_; }
  double q() const { return q_; }
  double vartheta() const { return vartheta_; }
  /// Ascending weights w with |q - w/n| ≤ ϑ.
  const std::vector<std::size_t>& weights() const { return weights_; }
  bool contains(std::size_t w) const;

 private:
  std::size_t n_;
  double q_;
  double vartheta_;
  std::vector<std::size_t> weights_;
};

/// C(n,w) q^w (1-q)^{n-w}, evaluated in log space.
double binomial_pmf(std::size_t n, std::size_t w, double q);

/// p(A).
double weight_set_prob(const SparseSignalConfig& cfg);
/// p(Ā) = 1 - p(A), summed directly over the complement.
double tail_prob(const SparseSignalConfig& cfg);
/// 2 exp(-q n ϑ² / 3).
double chernoff_epsilon(const SparseSignalConfig& cfg);

struct Pattern {
  std::vector<std::uint8_t> bits;
  std::size_t weight = 0;
  std::uint64_t attempts = 0;
};
/// Bernoulli(q) patterns conditioned on w(x) ∈ A by rejection.
Pattern sample_pattern(const SparseSignalConfig& cfg, std::uint64_t seed, std::uint64_t max_attempts = 1'000'000);

/// Σ_{x∈A} p_X(x) ⊗_i ρ_{x_i}. Requires dim^n ≤ kMaxDim.
DensityOperator willie_state_exact(const channels::WillieModel& model, const SparseSignalConfig& cfg);
/// ρ̄ = (1 - q)ρ₀ + qρ_π.
DensityOperator mixed_output(const channels::WillieModel& model, double q);

struct BoundChain {
  double d_exact = 0.0;          // D(ρ^{Wⁿ}‖ρ₀^{⊗n})
  double d_product = 0.0;        // D(ρ̄^{⊗n}‖ρ₀^{⊗n}), dense
  double d_single_scaled = 0.0;  // n D(ρ̄‖ρ₀)
  double d_chi2_bound = 0.0;     // q² n D_χ²(ρ_π‖ρ₀)
};
/// Throws SupportViolation when supp ρ_π ⊄ supp ρ₀.
BoundChain bound_chain(const channels::WillieModel& model, const SparseSignalConfig& cfg);
/// Same, reusing an n-use state already built by willie_state_exact.
BoundChain bound_chain(const channels::WillieModel& model, const SparseSignalConfig& cfg,
                       const DensityOperator& rho_n);

struct AppendixReport {
  double qre_total = 0.0;
  double term_product = 0.0;
  double term_entropy = 0.0;
  double term_cross = 0.0;
  double epsilon = 0.0;  // ½‖ρ̄^{⊗n} - ρ^{Wⁿ}‖₁
  double tail = 0.0;     // p(Ā)
  double chernoff_bound = 0.0;
  double fannes_bound = 0.0;               // ε n log d + h(ε)
  std::optional<double> holder_bound;      // 2 ε n log(1/λ_min(ρ₀)); empty when λ_min(ρ₀) ≤ tol::support
};
AppendixReport appendix_report(const channels::WillieModel& model, const SparseSignalConfig& cfg);
AppendixReport appendix_report(const channels::WillieModel& model, const SparseSignalConfig& cfg,
                               const DensityOperator& rho_n);

/// ε computed from the dense n-use states.
double epsilon_exact(const channels::WillieModel& model, const SparseSignalConfig& cfg);

/// ε for commuting ρ₀, ρ_π without forming d^n-dimensional matrices: both
/// n-use states are diagonal in the common eigenbasis, so ε is a total
/// variation distance summed over output type classes. Works for n well past
/// the dense cap. Throws InvalidArgument if the pair does not commute.
double epsilon_commuting(const channels::WillieModel& model, const SparseSignalConfig& cfg);

/// True when ρ₀ and ρ_π commute to within `tolerance` (max-abs commutator).
bool commuting(const channels::WillieModel& model, double tolerance = 1e-12);

}  // namespace covertq::sparse
