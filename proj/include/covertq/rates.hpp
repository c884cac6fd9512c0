#pragma once

#include <cstddef>
#include <optional>

#include "covertq/pauli.hpp"

namespace covertq::rates {

/// Asymptotic qubit-count lower bound M(n) ≥ (1-ϑ)√n c_q rate √δ, plus the
/// covert classical-bit budget when classical assistance is used.
struct ThroughputBound {
  std::size_t n = 0;
  double vartheta = 0.0;
  double c_q = 0.0;
  double delta_qre = 0.0;
  double rate = 0.0;
  double m_lower = 0.0;
  std::optional<double> classical_bits_upper;
};

/// Shannon entropy in bits.
double entropy4(const PauliDistribution& p);
/// [1 - H(p)]⁺.
double hashing_rate(const PauliDistribution& p);
/// (1 - p_f) [1 - H(q_tw)]⁺.
double distillation_rate(const PauliDistribution& q_tw, double p_f);

ThroughputBound theorem1_bound(std::size_t n, double vartheta, double c_q, double delta_qre, const PauliDistribution& p);
ThroughputBound theorem2_bound(std::size_t n, double vartheta, double c_q, double delta_qre,
                               const PauliDistribution& q_tw, double p_f);

/// Bits used by one realization of the assisted protocol: w status bits plus
/// two teleportation bits per distilled pair.
double classical_bits_for_realization(std::size_t weight, double distill_rate);

}  // namespace covertq::rates
