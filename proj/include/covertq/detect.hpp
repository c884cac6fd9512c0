#pragma once

#include <cstdint>

#include "covertq/channels.hpp"
#include "covertq/sparse.hpp"

namespace covertq::detect {

struct DetectionResult {
  std::size_t n = 0;
  double trace_distance = 0.0;  // ‖ρ^{Wⁿ} - ρ₀^{⊗n}‖₁
  double p_e_willie = 0.5;      // ½ - ¼ trace_distance
  double qre_exact = 0.0;
  double qre_budget = 0.0;
  bool covert_ok = true;        // qre_exact ≤ qre_budget
};

/// Exact optimal binary test between ρ₀^{⊗n} and the sparse-signaling state.
/// Throws DimensionCap past dim^n = 1024 and SupportViolation when
/// supp ρ_π ⊄ supp ρ₀.
DetectionResult detection_at_n(const channels::WillieModel& model, const sparse::SparseSignalConfig& cfg,
                               double delta_qre);
/// Same, reusing an n-use state already built by sparse::willie_state_exact.
DetectionResult detection_at_n(const channels::WillieModel& model, const sparse::SparseSignalConfig& cfg,
                               double delta_qre, const DensityOperator& rho_n);

/// Bell-basis process estimate of Bob's full per-qubit path: twirl, channel,
/// qubit projection with I/2 replacement on failure, inverse twirl.
/// Deterministic given (samples, seed).
PauliDistribution pipeline_tomography(const channels::QuantumChannel& ch, std::uint64_t samples, std::uint64_t seed);

}  // namespace covertq::detect
