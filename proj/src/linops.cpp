#include "covertq/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace covertq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::DimensionCap: return "dimension_cap";
    case ErrorKind::NotHermitian: return "not_hermitian";
    case ErrorKind::NotDensityOperator: return "not_density_operator";
    case ErrorKind::TracePreservation: return "trace_preservation";
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::SupportViolation: return "support_violation";
    case ErrorKind::DegenerateChannel: return "degenerate_channel";
    case ErrorKind::EstimationFailure: return "estimation_failure";
    case ErrorKind::RejectionCap: return "rejection_cap";
    case ErrorKind::Io: return "io_error";
  }
  return "unknown";
}

namespace linops {

void check_matrix(const ComplexMatrix& m, std::string_view what) {
  if (static_cast<std::size_t>(m.rows()) > kMaxDim || static_cast<std::size_t>(m.cols()) > kMaxDim) {
    fail(ErrorKind::DimensionCap, std::string(what) + ": dimension " + std::to_string(m.rows()) + "x" +
                                      std::to_string(m.cols()) + " exceeds cap " + std::to_string(kMaxDim));
  }
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cplx z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      fail(ErrorKind::InvalidArgument, std::string(what) + ": non-finite entry");
    }
  }
}

ComplexMatrix identity(std::size_t d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix diagonal(std::span<const double> entries) {
  ComplexMatrix m = ComplexMatrix::Zero(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ComplexMatrix basis_projector(std::size_t d, std::size_t i) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  if (static_cast<std::size_t>(ra * rb) > kMaxDim || static_cast<std::size_t>(ca * cb) > kMaxDim) {
    fail(ErrorKind::DimensionCap, "tensor: product dimension exceeds cap " + std::to_string(kMaxDim));
  }
  ComplexMatrix out(ra * rb, ca * cb);
#pragma omp parallel for schedule(static) if (ra * rb * ca * cb > 4096)
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix tensor_power(const ComplexMatrix& a, std::size_t n) {
  if (n == 0) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = a;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, a);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  if (m.rows() != m.cols()) fail(ErrorKind::DimensionMismatch, "partial_trace: matrix is not square");
  const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != static_cast<std::size_t>(m.rows())) {
    fail(ErrorKind::DimensionMismatch, "partial_trace: product of dims " + std::to_string(total) +
                                           " != matrix dimension " + std::to_string(m.rows()));
  }
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) fail(ErrorKind::DimensionMismatch, "partial_trace: keep index out of range");
    kept[k] = true;
  }

  // Row index = Σ_s idx_s · stride_s splits into a kept part and a traced part.
  std::vector<std::size_t> stride(dims.size());
  std::size_t s = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    stride[i] = s;
    s *= dims[i];
  }
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> off{0};
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (kept[i] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(off.size() * dims[i]);
      for (std::size_t base : off)
        for (std::size_t v = 0; v < dims[i]; ++v) next.push_back(base + v * stride[i]);
      off = std::move(next);
    }
    return off;
  };
  const std::vector<std::size_t> off_keep = offsets(true);
  const std::vector<std::size_t> off_trace = offsets(false);

  const auto dk = static_cast<Eigen::Index>(off_keep.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
#pragma omp parallel for schedule(static) if (dk > 16)
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      cplx acc = 0.0;
      for (std::size_t t : off_trace) acc += m(off_keep[a] + t, off_keep[b] + t);
      out(a, b) = acc;
    }
  }
  return out;
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return hermiticity_residual(m) <= tolerance * scale;
}

EigenSystem eig_hermitian(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    fail(ErrorKind::NotHermitian,
         "eig_hermitian: input is not Hermitian (residual " + std::to_string(hermiticity_residual(m)) + ")");
  }
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) fail(ErrorKind::InvalidArgument, "eig_hermitian: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::DimensionMismatch, "trace_norm: matrix is not square");
  if (m.size() == 0) return 0.0;
  if (is_hermitian(m)) return eig_hermitian(m).values.cwiseAbs().sum();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

ComplexMatrix spectral_function(const EigenSystem& es, const std::function<double(double)>& f) {
  RealVector fv(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) fv(i) = f(es.values(i));
  return es.vectors * fv.cast<cplx>().asDiagonal() * es.vectors.adjoint();
}

EigenSystem tensor_eigensystem(const EigenSystem& a, const EigenSystem& b) {
  const Eigen::Index na = a.values.size(), nb = b.values.size();
  RealVector values(na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) values(i * nb + j) = a.values(i) * b.values(j);
  const ComplexMatrix vectors = tensor(a.vectors, b.vectors);

  std::vector<Eigen::Index> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) { return values(l) < values(r); });
  EigenSystem out{RealVector(values.size()), ComplexMatrix(vectors.rows(), vectors.cols())};
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.values(static_cast<Eigen::Index>(k)) = values(order[k]);
    out.vectors.col(static_cast<Eigen::Index>(k)) = vectors.col(order[k]);
  }
  return out;
}

}  // namespace linops

namespace {

linops::EigenSystem clamp_spectrum(linops::EigenSystem es) {
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values(i) < -tol::psd) {
      fail(ErrorKind::NotDensityOperator, "density operator has eigenvalue " + std::to_string(es.values(i)));
    }
    if (es.values(i) < 0.0) es.values(i) = 0.0;
  }
  return es;
}

}  // namespace

DensityOperator::DensityOperator(const ComplexMatrix& m) {
  linops::check_matrix(m, "density operator");
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::DimensionMismatch, "density operator must be square");
  if (!linops::is_hermitian(m)) fail(ErrorKind::NotHermitian, "density operator is not Hermitian");
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol::trace) {
    fail(ErrorKind::NotDensityOperator, "density operator trace " + std::to_string(tr) + " != 1");
  }
  matrix_ = 0.5 * (m + m.adjoint());
  spectrum_ = clamp_spectrum(linops::eig_hermitian(matrix_));
}

DensityOperator::DensityOperator(ComplexMatrix m, linops::EigenSystem es)
    : matrix_(std::move(m)), spectrum_(clamp_spectrum(std::move(es))) {}

DensityOperator DensityOperator::maximally_mixed(std::size_t d) {
  return DensityOperator(linops::identity(d) / static_cast<double>(d));
}

DensityOperator DensityOperator::basis_state(std::size_t d, std::size_t i) {
  if (i >= d) fail(ErrorKind::InvalidArgument, "basis state index out of range");
  return DensityOperator(linops::basis_projector(d, i));
}

DensityOperator DensityOperator::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) fail(ErrorKind::InvalidArgument, "pure state vector is zero");
  const ComplexVector v = psi / norm;
  return DensityOperator(ComplexMatrix(v * v.adjoint()));
}

DensityOperator DensityOperator::diagonal(std::span<const double> probabilities) {
  return DensityOperator(linops::diagonal(probabilities));
}

DensityOperator DensityOperator::tensor(const DensityOperator& a, const DensityOperator& b) {
  ComplexMatrix m = linops::tensor(a.matrix_, b.matrix_);
  return DensityOperator(std::move(m), linops::tensor_eigensystem(a.spectrum_, b.spectrum_));
}

DensityOperator DensityOperator::tensor_power(const DensityOperator& rho, std::size_t n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "tensor_power: n must be >= 1");
  DensityOperator out = rho;
  for (std::size_t k = 1; k < n; ++k) out = tensor(out, rho);
  return out;
}

}  // namespace covertq
