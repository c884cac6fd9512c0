#include "covertq/covert.hpp"

#include <algorithm>
#include <string>

namespace covertq::covert {

namespace {

// Projector residuals are compared against sqrt(tolerance): eigenvectors of a
// rank-deficient σ are only resolved to ~eps/gap near its kernel.
double residual_tolerance(double tolerance) { return std::sqrt(tolerance); }

void require_same_dim(const DensityOperator& a, const DensityOperator& b, const char* op) {
  if (a.dim() != b.dim()) {
    fail(ErrorKind::DimensionMismatch, std::string(op) + ": dimensions " + std::to_string(a.dim()) + " and " +
                                           std::to_string(b.dim()) + " differ");
  }
}

}  // namespace

double von_neumann_entropy(const DensityOperator& rho) {
  double s = 0.0;
  for (double l : rho.spectrum().values)
    if (l > tol::support) s -= l * std::log2(l);
  return s;
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

bool support_contained(const DensityOperator& rho, const DensityOperator& sigma, double tolerance) {
  require_same_dim(rho, sigma, "support_contained");
  const auto& ss = sigma.spectrum();
  const auto& rs = rho.spectrum();
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < ss.values.size(); ++i)
    if (ss.values(i) <= tolerance) kernel.push_back(i);
  if (kernel.empty()) return true;
  const double limit = residual_tolerance(tolerance);
  for (Eigen::Index r = 0; r < rs.values.size(); ++r) {
    if (rs.values(r) <= tolerance) continue;
    double leak = 0.0;  // ‖(I - P_σ) u‖²
    for (Eigen::Index k : kernel) leak += std::norm(ss.vectors.col(k).dot(rs.vectors.col(r)));
    if (std::sqrt(leak) > limit) return false;
  }
  return true;
}

double qre(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho, sigma, "qre");
  if (!support_contained(rho, sigma)) return kInfinity;
  const auto& ss = sigma.spectrum();
  double cross = 0.0;  // tr ρ log σ on supp σ
  for (Eigen::Index i = 0; i < ss.values.size(); ++i) {
    if (ss.values(i) <= tol::support) continue;
    const ComplexVector v = ss.vectors.col(i);
    cross += std::log2(ss.values(i)) * (v.adjoint() * rho.matrix() * v)(0, 0).real();
  }
  return std::max(0.0, -von_neumann_entropy(rho) - cross);
}

double qre_given_support(const DensityOperator& rho, const DensityOperator& sigma, double cutoff) {
  require_same_dim(rho, sigma, "qre_given_support");
  const auto& ss = sigma.spectrum();
  double cross = 0.0;
  for (Eigen::Index i = 0; i < ss.values.size(); ++i) {
    if (ss.values(i) <= cutoff) continue;
    const ComplexVector v = ss.vectors.col(i);
    cross += std::log2(ss.values(i)) * (v.adjoint() * rho.matrix() * v)(0, 0).real();
  }
  return std::max(0.0, -von_neumann_entropy(rho) - cross);
}

double tensor_power_cutoff(const DensityOperator& sigma, std::size_t n) {
  const auto& vals = sigma.spectrum().values;
  if (vals(0) > tol::support) return 0.0;
  double smallest = 1.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals(i) > tol::support) smallest = std::min(smallest, vals(i));
  return 0.5 * std::pow(smallest, static_cast<double>(n));
}

double chi2(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho, sigma, "chi2");
  if (!support_contained(rho, sigma)) return kInfinity;
  const auto& ss = sigma.spectrum();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < ss.values.size(); ++i) {
    if (ss.values(i) <= tol::support) continue;
    acc += (rho.matrix() * ss.vectors.col(i)).squaredNorm() / ss.values(i);
  }
  return std::max(0.0, acc - 1.0);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  require_same_dim(rho, sigma, "trace_distance");
  return linops::trace_norm(rho.matrix() - sigma.matrix());
}

double helstrom_error(const DensityOperator& rho1, const DensityOperator& rho0) {
  return std::clamp(0.5 - 0.25 * trace_distance(rho1, rho0), 0.0, 0.5);
}

PinskerGap pinsker_gap(const DensityOperator& rho, const DensityOperator& sigma) {
  const double d = qre(rho, sigma);
  return {0.25 * trace_distance(rho, sigma), std::isinf(d) ? kInfinity : std::sqrt(kNatsPerBit * d / 8.0)};
}

CovertConstant covert_constant(const channels::WillieModel& model) {
  if (!support_contained(model.rho_pi, model.rho0)) {
    fail(ErrorKind::SupportViolation,
         "supp(rho_pi^W) is not contained in supp(rho_0^W): covert communication is impossible for this channel");
  }
  const double x = chi2(model.rho_pi, model.rho0);
  if (x <= 1e-14) return {kInfinity, x, true};
  return {1.0 / std::sqrt(x), x, false};
}

double q_for_budget(double c_q, double delta_qre, std::size_t n) {
  return covertness_budget(c_q, delta_qre, n).q;
}

CovertnessBudget covertness_budget(double c_q, double delta_qre, std::size_t n) {
  if (!(c_q > 0.0)) fail(ErrorKind::InvalidArgument, "c_q must be positive");
  if (!(delta_qre >= 0.0)) fail(ErrorKind::InvalidArgument, "delta_qre must be non-negative");
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  CovertnessBudget b{delta_qre, c_q, n, 0.0, false};
  const double raw = std::isinf(c_q) ? (delta_qre > 0.0 ? kInfinity : 0.0)
                                     : c_q * std::sqrt(delta_qre / static_cast<double>(n));
  b.clamped = raw > 1.0;
  b.q = std::min(1.0, raw);
  return b;
}

GibbsState gibbs_state(const ComplexMatrix& hamiltonian, double energy) {
  linops::check_matrix(hamiltonian, "hamiltonian");
  const auto es = linops::eig_hermitian(hamiltonian);
  const RealVector& lam = es.values;
  const double lo = lam(0), hi = lam(lam.size() - 1);
  const double span = std::max(1.0, hi - lo);
  if (!(energy > lo + 1e-12 * span && energy < hi - 1e-12 * span)) {
    fail(ErrorKind::InvalidArgument, "gibbs_state: energy " + std::to_string(energy) +
                                         " outside the attainable open interval (" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + ")");
  }

  auto weights = [&](double beta) {
    const double ref = beta >= 0.0 ? lo : hi;  // keeps every exponent ≤ 0
    RealVector w(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) w(i) = std::exp(-beta * (lam(i) - ref));
    return RealVector(w / w.sum());
  };
  auto excess = [&](double beta) { return weights(beta).dot(lam) - energy; };  // decreasing in β

  double beta = 0.0;
  const double f0 = excess(0.0);
  if (f0 != 0.0) {
    double a = 0.0, b = f0 > 0.0 ? 1.0 : -1.0;
    while ((excess(b) > 0.0) == (f0 > 0.0)) {
      a = b;
      b *= 2.0;
      if (std::abs(b) > 1e300) fail(ErrorKind::InvalidArgument, "gibbs_state: could not bracket beta");
    }
    for (int it = 0; it < 400 && a != b; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid == a || mid == b) break;
      if ((excess(mid) > 0.0) == (f0 > 0.0)) a = mid;
      else b = mid;
    }
    beta = 0.5 * (a + b);
  }
  const RealVector w = weights(beta);
  ComplexMatrix rho = es.vectors * w.cast<cplx>().asDiagonal() * es.vectors.adjoint();
  rho /= rho.trace().real();
  DensityOperator state(rho);
  const double achieved = (state.matrix() * hamiltonian).trace().real();
  if (std::abs(achieved - energy) > 1e-8 * span) {
    fail(ErrorKind::InvalidArgument, "gibbs_state: root finding missed the target energy");
  }
  return {std::move(state), beta, achieved};
}

std::vector<TailRow> chi2_tail_diagnostic(const DensityOperator& rho_pi, const ComplexMatrix& hamiltonian,
                                          double energy) {
  if (static_cast<std::size_t>(hamiltonian.rows()) != rho_pi.dim()) {
    fail(ErrorKind::DimensionMismatch, "chi2_tail_diagnostic: hamiltonian and state dimensions differ");
  }
  const GibbsState g = gibbs_state(hamiltonian, energy);
  const auto es = linops::eig_hermitian(hamiltonian);
  const ComplexMatrix sq = rho_pi.matrix() * rho_pi.matrix();
  std::vector<TailRow> rows;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    TailRow r;
    r.k = static_cast<std::size_t>(i) + 1;
    r.energy = es.values(i);
    const ComplexVector v = es.vectors.col(i);
    r.weight = std::max(0.0, (v.adjoint() * sq * v)(0, 0).real());
    // relative to the ground level so large β does not underflow everything
    r.envelope = std::exp(-g.beta * (r.energy - es.values(0))) / static_cast<double>(r.k);
    r.ratio = r.envelope > 0.0 ? r.weight / r.envelope : kInfinity;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace covertq::covert
