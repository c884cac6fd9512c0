#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covertq/linops.hpp"
#include "covertq/pauli.hpp"

namespace covertq::channels {

/// CPTP map stored as a Kraus list. The environment dimension of the
/// complementary channel equals the number of Kraus operators (no rank
/// minimization).
class QuantumChannel {
 public:
  /// Validates shapes and Σ K†K = I within `tp_tolerance`.
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus, double tp_tolerance = tol::tp);

  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  /// max-abs entry of Σ K†K - I.
  double tp_residual() const { return tp_residual_; }

 private:
  std::vector<ComplexMatrix> kraus_;
  std::size_t d_in_ = 0;
  std::size_t d_out_ = 0;
  double tp_residual_ = 0.0;
};

/// Output of the warden's channel for the innocent input (rho0) and for the
/// maximally mixed input (rho_pi).
struct WillieModel {
  DensityOperator rho0;
  DensityOperator rho_pi;
};

enum class WillieMode { Complementary, Direct };
std::string_view to_string(WillieMode mode);

/// Σ_k K ρ K†.
DensityOperator apply(const QuantumChannel& ch, const DensityOperator& rho);
/// Linear extension to arbitrary (not necessarily positive) operators.
ComplexMatrix apply_linear(const QuantumChannel& ch, const ComplexMatrix& x);

/// Trace-1 Choi matrix (id ⊗ N)(|Φ⟩⟨Φ|), reference factor first.
ComplexMatrix choi(const QuantumChannel& ch);

/// Environment-side channel: [N^c(ρ)]_{ij} = tr(K_i ρ K_j†).
QuantumChannel complementary(const QuantumChannel& ch);

/// second ∘ first.
QuantumChannel compose(const QuantumChannel& second, const QuantumChannel& first);

// Builders.
QuantumChannel identity(std::size_t d);
QuantumChannel depolarizing(double lambda);
QuantumChannel pauli(const PauliDistribution& p);
QuantumChannel amplitude_damping(double gamma);
/// Qubit embedded in the first two levels of a qutrit; with probability
/// p_leak the state is replaced by |2⟩⟨2|.
QuantumChannel qubit_into_qudit_leak(double p_leak);
/// Dispatch by name: identity(d), depolarizing(λ), pauli(pI,pX,pY,pZ),
/// amplitude_damping(γ), qubit_into_qudit_leak(p).
QuantumChannel build(std::string_view kind, std::span<const double> params);

// Channel spec files: JSON with d_in, d_out and kraus as an array of matrices,
// each a list of rows of [re, im] pairs. An optional "willie" object of the
// same shape supplies an explicit A→W channel.
struct ChannelSpec {
  QuantumChannel bob;
  std::optional<QuantumChannel> willie;
  std::string id;  // FNV-1a hash of the source text, hex
};

QuantumChannel parse_channel(std::string_view json_text, double tp_tolerance = tol::tp);
ChannelSpec parse_channel_spec(std::string_view json_text, double tp_tolerance = tol::tp);
ChannelSpec load_channel_spec(const std::string& path, double tp_tolerance = tol::tp);
QuantumChannel from_spec(const std::string& path);
/// Serializes with 17 significant digits so from_spec(to_spec(ch)) is exact.
std::string to_spec(const QuantumChannel& ch);

/// Parses either a basis index ("0") or an inline JSON matrix of [re, im]
/// pairs / plain reals.
DensityOperator parse_state_spec(std::string_view text, std::size_t dim);

/// rho0 = ch(innocent), rho_pi = ch(I/d_in) for the warden-side channel ch.
WillieModel willie_model(const QuantumChannel& willie_channel, const DensityOperator& innocent_input);

std::string fnv1a_hex(std::string_view bytes);

}  // namespace covertq::channels
