#include "covertq/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace covertq {

const ComplexMatrix& pauli_matrix(std::size_t j) {
  static const std::array<ComplexMatrix, 4> paulis = [] {
    std::array<ComplexMatrix, 4> p;
    const cplx i(0.0, 1.0);
    p[0] = ComplexMatrix::Identity(2, 2);
    p[1] = ComplexMatrix::Zero(2, 2);
    p[1](0, 1) = 1.0;
    p[1](1, 0) = 1.0;
    p[2] = ComplexMatrix::Zero(2, 2);
    p[2](0, 1) = -i;
    p[2](1, 0) = i;
    p[3] = ComplexMatrix::Zero(2, 2);
    p[3](0, 0) = 1.0;
    p[3](1, 1) = -1.0;
    return p;
  }();
  if (j > 3) fail(ErrorKind::InvalidArgument, "pauli index out of range");
  return paulis[j];
}

ComplexVector bell_state(std::size_t j) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const ComplexMatrix op = linops::tensor(ComplexMatrix::Identity(2, 2), pauli_matrix(j));
  return op * phi;
}

PauliDistribution::PauliDistribution(const std::array<double, 4>& p) : p_(p) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || v > 1.0 + tol::trace) {
      fail(ErrorKind::InvalidArgument, "Pauli distribution component out of [0,1]: " + std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol::trace) {
    fail(ErrorKind::InvalidArgument, "Pauli distribution sums to " + std::to_string(sum));
  }
}

PauliDistribution PauliDistribution::normalized(std::array<double, 4> p) {
  double sum = 0.0;
  for (double& v : p) {
    if (v < 0.0 && v > -tol::psd) v = 0.0;
    sum += v;
  }
  if (!(sum > 0.0)) fail(ErrorKind::InvalidArgument, "cannot normalize a zero Pauli weight vector");
  for (double& v : p) v /= sum;
  return PauliDistribution(p);
}

PauliDistribution PauliDistribution::depolarizing(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) fail(ErrorKind::InvalidArgument, "depolarizing lambda must be in [0,1]");
  return PauliDistribution({1.0 - 0.75 * lambda, 0.25 * lambda, 0.25 * lambda, 0.25 * lambda});
}

double PauliDistribution::max_abs_diff(const PauliDistribution& other) const {
  double m = 0.0;
  for (std::size_t j = 0; j < 4; ++j) m = std::max(m, std::abs(p_[j] - other.p_[j]));
  return m;
}

}  // namespace covertq
