#pragma once

// Dense complex linear algebra used by every other module. Matrices are
// row-major Eigen matrices capped at kMaxDim rows/cols.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "covertq/error.hpp"

namespace covertq {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

inline constexpr std::size_t kMaxDim = 1024;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double trace = 1e-10;
inline constexpr double psd = 1e-9;
inline constexpr double eig = 1e-8;
inline constexpr double tp = 1e-9;
// Eigenvalues at or below this are outside the support (logs, inverses, support tests).
inline constexpr double support = 1e-10;
}  // namespace tol

namespace linops {

struct EigenSystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Throws DimensionCap / InvalidArgument for oversized or non-finite input.
void check_matrix(const ComplexMatrix& m, std::string_view what);

ComplexMatrix identity(std::size_t d);
ComplexMatrix diagonal(std::span<const double> entries);
ComplexMatrix basis_projector(std::size_t d, std::size_t i);
ComplexMatrix dagger(const ComplexMatrix& m);

/// Kronecker product a ⊗ b.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix tensor_power(const ComplexMatrix& a, std::size_t n);

/// Reduced matrix over the subsystems listed in `keep` (any order; output
/// ordering follows ascending subsystem index). Tracing everything yields a
/// 1x1 matrix holding the trace.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

double hermiticity_residual(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::herm);

/// Ascending eigenvalues with orthonormal eigenvectors. Rejects non-Hermitian input.
EigenSystem eig_hermitian(const ComplexMatrix& m);

/// Sum of singular values; uses the Hermitian spectrum when applicable.
double trace_norm(const ComplexMatrix& m);

/// V f(λ) V† for a Hermitian eigensystem.
ComplexMatrix spectral_function(const EigenSystem& es, const std::function<double(double)>& f);

/// Eigensystem of a ⊗ b from the factors' eigensystems (values re-sorted ascending).
EigenSystem tensor_eigensystem(const EigenSystem& a, const EigenSystem& b);

}  // namespace linops

/// Hermitian, PSD, unit-trace operator. The spectrum is computed once at
/// construction (eigenvalues in [-tol::psd, 0) are clamped to zero) and kept
/// alongside the matrix, so instances are immutable and cheap to share.
class DensityOperator {
 public:
  explicit DensityOperator(const ComplexMatrix& m);

  static DensityOperator maximally_mixed(std::size_t d);
  static DensityOperator basis_state(std::size_t d, std::size_t i);
  static DensityOperator pure(const ComplexVector& psi);
  static DensityOperator diagonal(std::span<const double> probabilities);
  /// ρ^{⊗n} with its spectrum assembled from the single-copy spectrum.
  static DensityOperator tensor_power(const DensityOperator& rho, std::size_t n);
  static DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const linops::EigenSystem& spectrum() const { return spectrum_; }
  double min_eigenvalue() const { return spectrum_.values(0); }

 private:
  DensityOperator(ComplexMatrix m, linops::EigenSystem es);
  ComplexMatrix matrix_;
  linops::EigenSystem spectrum_;
};

}  // namespace covertq
