#pragma once

// Divergences and covertness budgets. All entropies and divergences are in
// bits (base-2 logarithms). The one place nats enter is Pinsker's
// inequality, which holds for D measured in nats: rhs = sqrt(ln2 · D_bits / 8).

#include <cmath>
#include <limits>
#include <vector>
#include <numbers>

#include "covertq/channels.hpp"

namespace covertq::covert {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
/// Multiply a divergence in bits by this to obtain nats.
inline constexpr double kNatsPerBit = std::numbers::ln2;

double von_neumann_entropy(const DensityOperator& rho);
double binary_entropy(double x);

/// D(ρ‖σ) = tr ρ (log ρ - log σ); +inf when supp ρ ⊄ supp σ.
double qre(const DensityOperator& rho, const DensityOperator& sigma);

/// D(ρ‖σ) for callers that already know supp ρ ⊆ supp σ; eigenvalues of σ at
/// or below `cutoff` are treated as outside the support.
double qre_given_support(const DensityOperator& rho, const DensityOperator& sigma, double cutoff);

/// Support threshold for σ^{⊗n}: half the smallest product of in-support
/// single-copy eigenvalues, or 0 when σ has full rank. A fixed absolute cutoff
/// would drop genuine eigenvalues like (1e-2)^6.
double tensor_power_cutoff(const DensityOperator& sigma, std::size_t n);

/// tr(ρ² σ⁻¹) - 1 with σ⁻¹ on supp σ; +inf when supp ρ ⊄ supp σ.
double chi2(const DensityOperator& rho, const DensityOperator& sigma);

/// Whether every eigenvector of rho above `tolerance` lies in the span of
/// sigma's eigenvectors above `tolerance` (projector residual ≤ tolerance).
bool support_contained(const DensityOperator& rho, const DensityOperator& sigma, double tolerance = tol::support);

/// ‖ρ - σ‖₁.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Optimal equal-prior error ½ - ¼‖ρ₁ - ρ₀‖₁.
double helstrom_error(const DensityOperator& rho1, const DensityOperator& rho0);

struct PinskerGap {
  double lhs = 0.0;  // ¼‖ρ - σ‖₁
  double rhs = 0.0;  // sqrt(D/8), D in nats
};
PinskerGap pinsker_gap(const DensityOperator& rho, const DensityOperator& sigma);

/// c_q = 1/sqrt(D_χ²(ρ_π‖ρ₀)). `trivially_covert` is set (and value = +inf)
/// when the two outputs coincide.
struct CovertConstant {
  double value = 0.0;
  double chi2 = 0.0;
  bool trivially_covert = false;
};
/// Throws SupportViolation when supp ρ_π ⊄ supp ρ₀.
CovertConstant covert_constant(const channels::WillieModel& model);

/// min(1, c_q sqrt(δ/n)); δ = 0 gives 0.
double q_for_budget(double c_q, double delta_qre, std::size_t n);

struct CovertnessBudget {
  double delta_qre = 0.0;
  double c_q = 0.0;
  std::size_t n = 0;
  double q = 0.0;
  bool clamped = false;  // c_q sqrt(δ/n) exceeded 1
};
CovertnessBudget covertness_budget(double c_q, double delta_qre, std::size_t n);

struct GibbsState {
  DensityOperator state;
  double beta = 0.0;
  double energy = 0.0;  // achieved tr(ρ H)
};
/// e^{-βH}/Z with β solving tr(e^{-βH}(H - E₀)) = 0. Any E₀ strictly inside
/// (λ_min(H), λ_max(H)) is accepted; β < 0 above the maximally mixed energy.
GibbsState gibbs_state(const ComplexMatrix& hamiltonian, double energy);

/// One energy level of the truncated tail diagnostic.
struct TailRow {
  std::size_t k = 0;         // 1-based level index, ascending energy
  double energy = 0.0;       // λ_k
  double weight = 0.0;       // tr(ρ_π² Π_k)
  double envelope = 0.0;     // e^{-β (λ_k - λ_1)} / k
  double ratio = 0.0;        // weight / envelope
};

/// Per-level comparison of ρ_π² against the Gibbs envelope e^{-βλ_k}/k with
/// β from gibbs_state(H, E₀). The tail condition is asymptotic, so this is a
/// diagnostic only: nothing here passes or fails.
std::vector<TailRow> chi2_tail_diagnostic(const DensityOperator& rho_pi, const ComplexMatrix& hamiltonian,
                                          double energy);

}  // namespace covertq::covert
