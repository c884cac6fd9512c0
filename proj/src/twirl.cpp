#include "covertq/twirl.hpp"

#include <cmath>
#include <string>

#include "covertq/kernels.hpp"

namespace covertq::twirl {

ProjectionStats projection_stats(const channels::QuantumChannel& ch) {
  if (ch.d_in() != 2) fail(ErrorKind::InvalidArgument, "projection_stats: channel input must be a qubit");
  if (ch.d_out() < 2) fail(ErrorKind::InvalidArgument, "projection_stats: channel output has no qubit subspace");
  const std::size_t dout = ch.d_out();
  const ComplexMatrix j = channels::choi(ch);
  ComplexMatrix block(4, 4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t e = 0; e < 2; ++e) block(a * 2 + b, c * 2 + e) = j(a * dout + b, c * dout + e);
  const double kept = block.trace().real();
  if (!(kept > 1e-12)) {
    fail(ErrorKind::DegenerateChannel, "projection onto the qubit subspace always fails (p_f = 1)");
  }
  return {std::clamp(1.0 - kept, 0.0, 1.0), block / kept};
}

PauliDistribution twirl_parameters(const ProjectionStats& stats) {
  std::array<double, 4> q{};
  for (std::size_t j = 0; j < 4; ++j) {
    const ComplexVector phi = bell_state(j);
    q[j] = (phi.adjoint() * stats.conditional_choi * phi)(0, 0).real();
  }
  return PauliDistribution::normalized(q);
}

PauliDistribution compose_with_failure(const PauliDistribution& q_tw, double p_f) {
  if (!(p_f >= 0.0 && p_f <= 1.0)) fail(ErrorKind::InvalidArgument, "p_f must be in [0,1]");
  std::array<double, 4> p{};
  for (std::size_t j = 0; j < 4; ++j) p[j] = (1.0 - p_f) * q_tw[j] + 0.25 * p_f;
  return PauliDistribution::normalized(p);
}

PauliDistribution compose_with_failure_printed(const PauliDistribution& q_tw, double p_f) {
  if (!(p_f >= 0.0 && p_f <= 1.0)) fail(ErrorKind::InvalidArgument, "p_f must be in [0,1]");
  const double keep = 1.0 - 0.75 * p_f;
  return PauliDistribution::normalized(
      {keep * q_tw[0], keep * q_tw[1] + 0.25 * p_f, keep * q_tw[2] + 0.25 * p_f, keep * q_tw[3] + 0.25 * p_f});
}

PauliDistribution monte_carlo_twirl(const channels::QuantumChannel& ch, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) fail(ErrorKind::InvalidArgument, "monte_carlo_twirl: samples must be >= 1");
  const auto counts =
      kernels::bell_process_counts(ch, samples, seed, kernels::OnProjectionFailure::Discard);
  const std::uint64_t kept = counts.samples - counts.failures;
  if (kept == 0) {
    fail(ErrorKind::EstimationFailure, "all " + std::to_string(samples) + " samples failed the qubit projection");
  }
  std::array<double, 4> q{};
  for (std::size_t j = 0; j < 4; ++j) q[j] = static_cast<double>(counts.outcomes[j]) / static_cast<double>(kept);
  return PauliDistribution::normalized(q);
}

DensityOperator average_input_state(std::size_t w) {
  if (w == 0) fail(ErrorKind::InvalidArgument, "average_input_state: w must be >= 1");
  if (w >= 64 || (std::size_t{1} << w) > kMaxDim) {
    fail(ErrorKind::DimensionCap, "average_input_state: 2^" + std::to_string(w) + " exceeds dimension cap");
  }
  return DensityOperator::tensor_power(DensityOperator::maximally_mixed(2), w);
}

channels::QuantumChannel projected_with_replacement(const channels::QuantumChannel& ch) {
  if (ch.d_in() != 2 || ch.d_out() < 2) fail(ErrorKind::InvalidArgument, "projected_with_replacement: bad dimensions");
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : ch.kraus()) {
    kraus.push_back(k.topRows(2));
    // Leaked component b ≥ 2 is swapped for I/2: Kraus |c⟩⟨b|K / √2.
    for (Eigen::Index b = 2; b < k.rows(); ++b) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        ComplexMatrix op = ComplexMatrix::Zero(2, 2);
        op.row(c) = k.row(b) / std::sqrt(2.0);
        kraus.push_back(std::move(op));
      }
    }
  }
  return channels::QuantumChannel(std::move(kraus));
}

channels::QuantumChannel pauli_twirl(const channels::QuantumChannel& ch) {
  if (ch.d_in() != 2 || ch.d_out() != 2) fail(ErrorKind::InvalidArgument, "pauli_twirl: qubit channel required");
  std::vector<ComplexMatrix> kraus;
  for (std::size_t j = 0; j < 4; ++j)
    for (const auto& k : ch.kraus()) kraus.push_back(0.5 * pauli_matrix(j) * k * pauli_matrix(j));
  return channels::QuantumChannel(std::move(kraus));
}

}  // namespace covertq::twirl
