#include "covertq/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "covertq/covert.hpp"
#include "covertq/kernels.hpp"
#include "covertq/parallel.hpp"

namespace covertq::sparse {

namespace {

// Boundary weights with |q - w/n| = ϑ exactly must not be lost to rounding.
constexpr double kWeightSlack = 1e-12;

std::size_t checked_power(std::size_t d, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= d;
    if (total > kMaxDim) {
      fail(ErrorKind::DimensionCap, "exact n-use state needs dimension " + std::to_string(d) + "^" +
                                        std::to_string(n) + " > " + std::to_string(kMaxDim) +
                                        "; reduce n (qubit outputs allow n <= 10, qutrit n <= 6)");
    }
  }
  return total;
}

void require_support(const channels::WillieModel& model) {
  if (!covert::support_contained(model.rho_pi, model.rho0)) {
    fail(ErrorKind::SupportViolation, "supp(rho_pi^W) is not contained in supp(rho_0^W)");
  }
}

ComplexMatrix log2_on_support(const DensityOperator& sigma, double cutoff) {
  return linops::spectral_function(sigma.spectrum(), [cutoff](double x) { return x > cutoff ? std::log2(x) : 0.0; });
}

}  // namespace

SparseSignalConfig::SparseSignalConfig(std::size_t n, double q, double vartheta) : n_(n), q_(q), vartheta_(vartheta) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "sparse config: n must be >= 1");
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidArgument, "sparse config: q must be in (0,1), got " + std::to_string(q));
  if (!(vartheta > 0.0 && vartheta <= 1.0)) {
    fail(ErrorKind::InvalidArgument, "sparse config: vartheta must be in (0,1], got " + std::to_string(vartheta));
  }
  for (std::size_t w = 0; w <= n; ++w) {
    if (std::abs(q - static_cast<double>(w) / static_cast<double>(n)) <= vartheta + kWeightSlack) weights_.push_back(w);
  }
  if (weights_.empty()) {
    fail(ErrorKind::InvalidArgument, "sparse config: weight set A is empty for n=" + std::to_string(n) +
                                         ", q=" + std::to_string(q) + ", vartheta=" + std::to_string(vartheta));
  }
}

bool SparseSignalConfig::contains(std::size_t w) const {
  return std::binary_search(weights_.begin(), weights_.end(), w);
}

double binomial_pmf(std::size_t n, std::size_t w, double q) {
  if (w > n) return 0.0;
  if (q <= 0.0) return w == 0 ? 1.0 : 0.0;
  if (q >= 1.0) return w == n ? 1.0 : 0.0;
  const double nn = static_cast<double>(n), ww = static_cast<double>(w);
  const double log_c = std::lgamma(nn + 1.0) - std::lgamma(ww + 1.0) - std::lgamma(nn - ww + 1.0);
  return std::exp(log_c + ww * std::log(q) + (nn - ww) * std::log1p(-q));
}

double weight_set_prob(const SparseSignalConfig& cfg) {
  double p = 0.0;
  for (std::size_t w : cfg.weights()) p += binomial_pmf(cfg.n(), w, cfg.q());
  return std::min(1.0, p);
}

double tail_prob(const SparseSignalConfig& cfg) {
  double p = 0.0;
  for (std::size_t w = 0; w <= cfg.n(); ++w)
    if (!cfg.contains(w)) p += binomial_pmf(cfg.n(), w, cfg.q());
  return std::min(1.0, p);
}

double chernoff_epsilon(const SparseSignalConfig& cfg) {
  return 2.0 * std::exp(-cfg.q() * static_cast<double>(cfg.n()) * cfg.vartheta() * cfg.vartheta() / 3.0);
}

Pattern sample_pattern(const SparseSignalConfig& cfg, std::uint64_t seed, std::uint64_t max_attempts) {
  auto rng = parallel::stream_engine(seed, 0);
  Pattern x;
  x.bits.resize(cfg.n());
  while (x.attempts < max_attempts) {
    ++x.attempts;
    x.weight = 0;
    for (auto& b : x.bits) {
      b = parallel::uniform01(rng) < cfg.q() ? 1 : 0;
      x.weight += b;
    }
    if (cfg.contains(x.weight)) return x;
  }
  fail(ErrorKind::RejectionCap,
       "sample_pattern: no pattern in A after " + std::to_string(max_attempts) + " attempts (p(A) too small)");
}

namespace {

void require_state_dim(const DensityOperator& rho_n, const channels::WillieModel& model,
                       const SparseSignalConfig& cfg) {
  if (rho_n.dim() != checked_power(model.rho0.dim(), cfg.n())) {
    fail(ErrorKind::DimensionMismatch, "precomputed n-use state has the wrong dimension");
  }
}

}  // namespace

DensityOperator mixed_output(const channels::WillieModel& model, double q) {
  return DensityOperator((1.0 - q) * model.rho0.matrix() + q * model.rho_pi.matrix());
}

DensityOperator willie_state_exact(const channels::WillieModel& model, const SparseSignalConfig& cfg) {
  checked_power(model.rho0.dim(), cfg.n());
  ComplexMatrix m = kernels::weighted_pattern_mixture(model.rho0.matrix(), model.rho_pi.matrix(), cfg.q(), cfg.n(),
                                                      cfg.weights());
  m /= weight_set_prob(cfg);
  // Renormalize away the rounding in p(A) so the trace check sees exactly 1.
  m /= m.trace().real();
  return DensityOperator(m);
}

BoundChain bound_chain(const channels::WillieModel& model, const SparseSignalConfig& cfg) {
  require_support(model);
  return bound_chain(model, cfg, willie_state_exact(model, cfg));
}

BoundChain bound_chain(const channels::WillieModel& model, const SparseSignalConfig& cfg,
                       const DensityOperator& rho_n) {
  require_support(model);
  checked_power(model.rho0.dim(), cfg.n());
  require_state_dim(rho_n, model, cfg);
  const auto n = cfg.n();
  const DensityOperator rho_bar = mixed_output(model, cfg.q());
  // Product spectra are assembled from the single copy. A fresh dense
  // eigendecomposition of σ^{⊗n} loses ~1e-9 once λ_min^n gets small.
  const DensityOperator sigma_n = DensityOperator::tensor_power(model.rho0, n);
  const DensityOperator bar_n = DensityOperator::tensor_power(rho_bar, n);

  // support was settled on the single copy; it carries over to n copies exactly
  const double cutoff = covert::tensor_power_cutoff(model.rho0, n);
  BoundChain out;
  out.d_exact = covert::qre_given_support(rho_n, sigma_n, cutoff);
  out.d_product = covert::qre_given_support(bar_n, sigma_n, cutoff);
  out.d_single_scaled = static_cast<double>(n) * covert::qre(rho_bar, model.rho0);
  out.d_chi2_bound = cfg.q() * cfg.q() * static_cast<double>(n) * covert::chi2(model.rho_pi, model.rho0);
  return out;
}

double epsilon_exact(const channels::WillieModel& model, const SparseSignalConfig& cfg) {
  checked_power(model.rho0.dim(), cfg.n());
  const DensityOperator rho_n = willie_state_exact(model, cfg);
  const ComplexMatrix bar_n = linops::tensor_power(mixed_output(model, cfg.q()).matrix(), cfg.n());
  return 0.5 * linops::trace_norm(bar_n - rho_n.matrix());
}

AppendixReport appendix_report(const channels::WillieModel& model, const SparseSignalConfig& cfg) {
  require_support(model);
  return appendix_report(model, cfg, willie_state_exact(model, cfg));
}

AppendixReport appendix_report(const channels::WillieModel& model, const SparseSignalConfig& cfg,
                               const DensityOperator& rho_n) {
  require_support(model);
  checked_power(model.rho0.dim(), cfg.n());
  require_state_dim(rho_n, model, cfg);
  const auto n = cfg.n();
  const auto d = static_cast<double>(model.rho0.dim());
  const DensityOperator sigma_n = DensityOperator::tensor_power(model.rho0, n);
  const DensityOperator bar_n = DensityOperator::tensor_power(mixed_output(model, cfg.q()), n);
  const double cutoff = covert::tensor_power_cutoff(model.rho0, n);
  const ComplexMatrix log_sigma = log2_on_support(sigma_n, cutoff);
  const ComplexMatrix diff = bar_n.matrix() - rho_n.matrix();

  AppendixReport r;
  r.qre_total = covert::qre_given_support(rho_n, sigma_n, cutoff);
  r.term_product = covert::qre_given_support(bar_n, sigma_n, cutoff);
  r.term_entropy = covert::von_neumann_entropy(bar_n) - covert::von_neumann_entropy(rho_n);
  r.term_cross = (diff * log_sigma).trace().real();
  r.epsilon = 0.5 * linops::trace_norm(diff);
  r.tail = tail_prob(cfg);
  r.chernoff_bound = chernoff_epsilon(cfg);
  r.fannes_bound = r.epsilon * static_cast<double>(n) * std::log2(d) + covert::binary_entropy(r.epsilon);
  const double lmin = model.rho0.min_eigenvalue();
  if (lmin > tol::support) r.holder_bound = 2.0 * r.epsilon * static_cast<double>(n) * std::log2(1.0 / lmin);
  return r;
}

bool commuting(const channels::WillieModel& model, double tolerance) {
  const ComplexMatrix& a = model.rho0.matrix();
  const ComplexMatrix& b = model.rho_pi.matrix();
  return (a * b - b * a).cwiseAbs().maxCoeff() <= tolerance;
}

double epsilon_commuting(const channels::WillieModel& model, const SparseSignalConfig& cfg) {
  if (!commuting(model)) fail(ErrorKind::InvalidArgument, "epsilon_commuting: rho0 and rho_pi do not commute");
  const std::size_t d = model.rho0.dim();

  // Common eigenbasis from a generic combination; retry if a coincidence in
  // the combined spectrum leaves the factors non-diagonal.
  std::vector<double> r0(d), r1(d);
  bool diagonalized = false;
  for (double mix : {0.6180339887498949, 0.4142135623730951, 0.7320508075688772}) {
    const auto es = linops::eig_hermitian(model.rho0.matrix() + mix * model.rho_pi.matrix());
    const ComplexMatrix a = es.vectors.adjoint() * model.rho0.matrix() * es.vectors;
    const ComplexMatrix b = es.vectors.adjoint() * model.rho_pi.matrix() * es.vectors;
    const ComplexMatrix off_a = a - ComplexMatrix(a.diagonal().asDiagonal());
    const ComplexMatrix off_b = b - ComplexMatrix(b.diagonal().asDiagonal());
    if (off_a.cwiseAbs().maxCoeff() > 1e-10 || off_b.cwiseAbs().maxCoeff() > 1e-10) continue;
    for (std::size_t c = 0; c < d; ++c) {
      r0[c] = std::max(0.0, a(c, c).real());
      r1[c] = std::max(0.0, b(c, c).real());
    }
    diagonalized = true;
    break;
  }
  if (!diagonalized) fail(ErrorKind::InvalidArgument, "epsilon_commuting: no common eigenbasis found");

  const std::size_t n = cfg.n();
  const double pa = weight_set_prob(cfg);
  // Per-pattern weight of the unconditioned minus the conditioned law.
  std::vector<double> beta(n + 1);
  for (std::size_t w = 0; w <= n; ++w) {
    const double base = std::exp(static_cast<double>(w) * std::log(cfg.q()) +
                                 static_cast<double>(n - w) * std::log1p(-cfg.q()));
    beta[w] = base * (1.0 - (cfg.contains(w) ? 1.0 / pa : 0.0));
  }
  std::vector<std::vector<double>> choose(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t a = 0; a <= n; ++a) {
    choose[a][0] = 1.0;
    for (std::size_t b = 1; b <= a; ++b) choose[a][b] = choose[a - 1][b - 1] + (b <= a - 1 ? choose[a - 1][b] : 0.0);
  }

  // Enumerate output types k (counts per outcome summing to n).
  double eps = 0.0;
  std::size_t visited = 0;
  std::vector<std::size_t> k(d, 0);
  auto visit = [&](auto&& self, std::size_t c, std::size_t left, double multinom) -> void {
    if (c + 1 == d) {
      k[c] = left;
      if (++visited > 5'000'000) fail(ErrorKind::DimensionCap, "epsilon_commuting: too many output types");
      // coeff[w] = Σ over patterns of weight w of ∏_i ρ_{x_i}(y_i) for one y of type k.
      std::vector<double> coeff{1.0};
      for (std::size_t o = 0; o < d; ++o) {
        std::vector<double> next(coeff.size() + k[o], 0.0);
        for (std::size_t j = 0; j <= k[o]; ++j) {
          const double f = choose[k[o]][j] * std::pow(r1[o], static_cast<double>(j)) *
                           std::pow(r0[o], static_cast<double>(k[o] - j));
          if (f == 0.0) continue;
          for (std::size_t w = 0; w < coeff.size(); ++w) next[w + j] += coeff[w] * f;
        }
        coeff = std::move(next);
      }
      double diff = 0.0;
      for (std::size_t w = 0; w < coeff.size(); ++w) diff += beta[w] * coeff[w];
      eps += multinom * std::abs(diff);
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      k[c] = v;
      self(self, c + 1, left - v, multinom * choose[left][v]);
    }
  };
  visit(visit, 0, n, 1.0);
  return 0.5 * eps;
}

}  // namespace covertq::sparse
