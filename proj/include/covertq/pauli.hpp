#pragma once

#include <array>
#include <cstddef>

#include "covertq/linops.hpp"

namespace covertq {

enum class Pauli : std::size_t { I = 0, X = 1, Y = 2, Z = 3 };

/// 2x2 Pauli matrix for index 0..3 (I, X, Y, Z).
const ComplexMatrix& pauli_matrix(std::size_t j);

/// |Φ_j⟩ = (I ⊗ σ_j)|Φ⁺⟩ with |Φ⁺⟩ = (|00⟩ + |11⟩)/√2.
ComplexVector bell_state(std::size_t j);

/// Probability vector (p_I, p_X, p_Y, p_Z) of a single-qubit Pauli channel.
class PauliDistribution {
 public:
  PauliDistribution() = default;
  /// Rejects negative components or a sum off by more than tol::trace.
  explicit PauliDistribution(const std::array<double, 4>& p);

  /// Clips tiny negative round-off and rescales to unit sum.
  static PauliDistribution normalized(std::array<double, 4> p);
  static PauliDistribution identity() { return PauliDistribution({1.0, 0.0, 0.0, 0.0}); }
  static PauliDistribution uniform() { return PauliDistribution({0.25, 0.25, 0.25, 0.25}); }
  /// (1 - 3λ/4, λ/4, λ/4, λ/4).
  static PauliDistribution depolarizing(double lambda);

  double operator[](std::size_t j) const { return p_[j]; }
  double operator[](Pauli j) const { return p_[static_cast<std::size_t>(j)]; }
  const std::array<double, 4>& values() const { return p_; }

  double max_abs_diff(const PauliDistribution& other) const;

 private:
  std::array<double, 4> p_{1.0, 0.0, 0.0, 0.0};
};

}  // namespace covertq
