#pragma once

// OpenMP kernels behind the Monte Carlo and exact-enumeration operations.
// Each takes an Execution flag; Serial runs the identical arithmetic on one
// thread and is what the tests compare the parallel path against.

#include <array>
#include <cstdint>
#include <span>

#include "covertq/channels.hpp"

namespace covertq::kernels {

enum class Execution { Serial, Parallel };

enum class OnProjectionFailure { Discard, ReplaceWithMaximallyMixed };

struct BellCounts {
  std::array<std::uint64_t, 4> outcomes{};  // Bell outcome tallies, indexed by Pauli
  std::uint64_t failures = 0;               // projections that missed the qubit subspace
  std::uint64_t samples = 0;
};

/// Bell-basis process estimation of a qubit-input channel with a uniformly
/// random Pauli twirl. Sample i uses stream i / kChunkSize of the seed.
BellCounts bell_process_counts(const channels::QuantumChannel& ch, std::uint64_t samples, std::uint64_t seed,
                               OnProjectionFailure policy, Execution exec = Execution::Parallel);

/// Σ_{w ∈ weights} Σ_{|x|=w} ∏_i p(x_i) ⊗_i ρ_{x_i}, with p(1) = q, p(0) = 1 - q,
/// ρ_0 = rho0, ρ_1 = rho1. Built site by site over weight classes.
ComplexMatrix weighted_pattern_mixture(const ComplexMatrix& rho0, const ComplexMatrix& rho1, double q, std::size_t n,
                                       std::span<const std::size_t> weights, Execution exec = Execution::Parallel);

}  // namespace covertq::kernels
