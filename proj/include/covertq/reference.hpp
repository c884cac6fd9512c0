#pragma once

// Serial, enumeration-based reference implementations. Slow on purpose: they
// walk every pattern x ∈ {0,1}^n and exist to check the OpenMP kernels.

#include <vector>

#include "covertq/channels.hpp"
#include "covertq/kernels.hpp"
#include "covertq/sparse.hpp"

namespace covertq::reference {

/// Σ_{x ∈ A} p_X(x) ⊗_i ρ_{x_i} / p(A), one pattern at a time.
ComplexMatrix willie_state_enumerated(const channels::WillieModel& model, const sparse::SparseSignalConfig& cfg);

/// p(A) by summing ∏ p_X(x_i) over all 2^n patterns.
double weight_set_prob_enumerated(const sparse::SparseSignalConfig& cfg);

/// Histogram of w(x) under i.i.d. Bernoulli(q), indexed by weight, by enumeration.
std::vector<double> weight_histogram_enumerated(std::size_t n, double q);

/// Monte Carlo counts on a single thread with the same stream layout.
kernels::BellCounts bell_process_counts_serial(const channels::QuantumChannel& ch, std::uint64_t samples,
                                               std::uint64_t seed, kernels::OnProjectionFailure policy);

}  // namespace covertq::reference
