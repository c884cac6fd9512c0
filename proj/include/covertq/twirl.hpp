#pragma once

#include <cstdint>

#include "covertq/channels.hpp"
#include "covertq/pauli.hpp"

namespace covertq::twirl {

/// Qubit-subspace projection of a channel's output. The qubit subspace is the
/// span of the first two output basis vectors.
struct ProjectionStats {
  double p_f = 0.0;                // 1 - tr[(I ⊗ Π) J (I ⊗ Π)] for the trace-1 Choi J
  ComplexMatrix conditional_choi;  // 4x4 block, renormalized to trace 1
};

/// Throws DegenerateChannel when the output never lands in the qubit subspace.
ProjectionStats projection_stats(const channels::QuantumChannel& ch);

/// Bell-diagonal of the conditional Choi matrix: the Pauli channel obtained by
/// twirling the post-projection map.
PauliDistribution twirl_parameters(const ProjectionStats& stats);

/// Pauli distribution of the completely-depolarizing-on-failure channel
/// composed with Pauli(q_tw): p_j = (1 - p_f) q_j + p_f/4 for every j.
PauliDistribution compose_with_failure(const PauliDistribution& q_tw, double p_f);

/// The closed form p_I = (1 - 3p_f/4) q_I, p_j = (1 - 3p_f/4) q_j + p_f/4
/// (j = X, Y, Z). Coincides with compose_with_failure only when p_f = 0 or
/// q_I = 1; kept for comparison.
PauliDistribution compose_with_failure_printed(const PauliDistribution& q_tw, double p_f);

/// Monte Carlo estimate of twirl_parameters(projection_stats(ch)): random
/// Pauli on half of |Φ⁺⟩, channel, qubit projection (failures discarded),
/// inverse Pauli, Bell measurement. Deterministic given (samples, seed).
PauliDistribution monte_carlo_twirl(const channels::QuantumChannel& ch, std::uint64_t samples, std::uint64_t seed);

/// (I/2)^{⊗w}.
DensityOperator average_input_state(std::size_t w);

/// The qubit map Bob realizes: Π N(ρ) Π + tr[(I - Π) N(ρ)] I/2.
channels::QuantumChannel projected_with_replacement(const channels::QuantumChannel& ch);

/// (1/4) Σ_P P ∘ N ∘ P for a qubit channel N.
channels::QuantumChannel pauli_twirl(const channels::QuantumChannel& ch);

}  // namespace covertq::twirl
