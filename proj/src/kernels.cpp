#include "covertq/kernels.hpp"

#include <algorithm>
#include <vector>

#include "covertq/parallel.hpp"
#include "covertq/pauli.hpp"

namespace covertq::kernels {

namespace {

// Outcome law of one sample given the twirl Pauli: success probability of the
// qubit projection and Bell outcome probabilities on each branch.
struct BranchModel {
  double success = 0.0;
  std::array<double, 4> on_success{};
  std::array<double, 4> on_failure{};
};

std::array<double, 4> bell_probabilities(const ComplexMatrix& rho_rb) {
  std::array<double, 4> p{};
  for (std::size_t j = 0; j < 4; ++j) {
    const ComplexVector phi = bell_state(j);
    p[j] = std::max(0.0, (phi.adjoint() * rho_rb * phi)(0, 0).real());
  }
  return p;
}

BranchModel simulate_branch(const channels::QuantumChannel& ch, std::size_t pauli) {
  const std::size_t dout = ch.d_out();
  const ComplexMatrix& sigma = pauli_matrix(pauli);
  const ComplexMatrix id2 = ComplexMatrix::Identity(2, 2);
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const ComplexVector input = linops::tensor(id2, sigma) * phi;

  ComplexMatrix kept = ComplexMatrix::Zero(4, 4);   // R ⊗ qubit block, unnormalized
  ComplexMatrix leaked = ComplexMatrix::Zero(2, 2); // reference marginal of the failure branch
  for (const auto& k : ch.kraus()) {
    const ComplexVector v = linops::tensor(id2, k) * input;  // R ⊗ B, length 2·d_out
    ComplexVector u(4);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) u(a * 2 + b) = v(a * dout + b);
    kept += u * u.adjoint();
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t b = 2; b < dout; ++b) leaked(a, c) += v(a * dout + b) * std::conj(v(c * dout + b));
  }

  BranchModel m;
  m.success = std::clamp(kept.trace().real(), 0.0, 1.0);
  const ComplexMatrix undo = linops::tensor(id2, sigma);
  if (m.success > 0.0) m.on_success = bell_probabilities(undo * (kept / m.success) * undo.adjoint());
  const double fail_weight = leaked.trace().real();
  if (fail_weight > 0.0) {
    const ComplexMatrix replaced = linops::tensor(leaked / fail_weight, id2 / 2.0);
    m.on_failure = bell_probabilities(undo * replaced * undo.adjoint());
  }
  return m;
}

std::size_t draw(const std::array<double, 4>& p, double u) {
  const double total = p[0] + p[1] + p[2] + p[3];
  double acc = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    acc += p[j] / total;
    if (u < acc) return j;
  }
  return 3;
}

void kron_accumulate(ComplexMatrix& out, double alpha, const ComplexMatrix& a, const ComplexMatrix& b,
                     Execution exec) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  const bool par = exec == Execution::Parallel && ra > 1;
#pragma omp parallel for schedule(static) if (par) num_threads(parallel::max_threads())
  for (Eigen::Index i = 0; i < ra; ++i) {
    for (Eigen::Index j = 0; j < ca; ++j) {
      const cplx s = alpha * a(i, j);
      if (s == cplx(0.0)) continue;
      out.block(i * rb, j * cb, rb, cb) += s * b;
    }
  }
}

}  // namespace

BellCounts bell_process_counts(const channels::QuantumChannel& ch, std::uint64_t samples, std::uint64_t seed,
                               OnProjectionFailure policy, Execution exec) {
  if (ch.d_in() != 2) fail(ErrorKind::InvalidArgument, "Bell process estimation needs a qubit-input channel");
  if (ch.d_out() < 2) fail(ErrorKind::InvalidArgument, "channel output has no qubit subspace");
  std::array<BranchModel, 4> branch;
  for (std::size_t p = 0; p < 4; ++p) branch[p] = simulate_branch(ch, p);

  const std::uint64_t chunks = (samples + parallel::kChunkSize - 1) / parallel::kChunkSize;
  std::vector<BellCounts> partial(chunks);
  const bool par = exec == Execution::Parallel && chunks > 1;
#pragma omp parallel for schedule(dynamic) if (par) num_threads(parallel::max_threads())
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    auto rng = parallel::stream_engine(seed, static_cast<std::uint64_t>(c));
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * parallel::kChunkSize;
    const std::uint64_t end = std::min(samples, begin + parallel::kChunkSize);
    BellCounts local;
    for (std::uint64_t s = begin; s < end; ++s) {
      const std::size_t pauli = static_cast<std::size_t>(rng() >> 62);
      const double u_proj = parallel::uniform01(rng);
      const double u_meas = parallel::uniform01(rng);
      const BranchModel& m = branch[pauli];
      ++local.samples;
      if (u_proj < m.success) {
        ++local.outcomes[draw(m.on_success, u_meas)];
      } else {
        ++local.failures;
        if (policy == OnProjectionFailure::ReplaceWithMaximallyMixed) ++local.outcomes[draw(m.on_failure, u_meas)];
      }
    }
    partial[static_cast<std::size_t>(c)] = local;
  }

  BellCounts total;
  for (const auto& p : partial) {
    for (std::size_t j = 0; j < 4; ++j) total.outcomes[j] += p.outcomes[j];
    total.failures += p.failures;
    total.samples += p.samples;
  }
  return total;
}

ComplexMatrix weighted_pattern_mixture(const ComplexMatrix& rho0, const ComplexMatrix& rho1, double q, std::size_t n,
                                       std::span<const std::size_t> weights, Execution exec) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "pattern mixture needs n >= 1");
  if (rho0.rows() != rho1.rows()) fail(ErrorKind::DimensionMismatch, "pattern mixture: state dimensions differ");
  const auto d = static_cast<std::size_t>(rho0.rows());
  std::size_t total_dim = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total_dim *= d;
    if (total_dim > kMaxDim) fail(ErrorKind::DimensionCap, "pattern mixture: d^n exceeds dimension cap");
  }
  if (weights.empty()) return ComplexMatrix::Zero(total_dim, total_dim);
  std::vector<bool> wanted(n + 1, false);
  for (std::size_t w : weights) {
    if (w > n) fail(ErrorKind::InvalidArgument, "pattern mixture: weight exceeds n");
    wanted[w] = true;
  }
  const std::size_t wmin = *std::min_element(weights.begin(), weights.end());
  const std::size_t wmax = *std::max_element(weights.begin(), weights.end());

  // layer[k] = Σ over patterns on the first m sites with weight k.
  std::vector<ComplexMatrix> layer(n + 1);
  layer[0] = ComplexMatrix::Ones(1, 1);
  auto rows = Eigen::Index{1};  // d^m
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const std::size_t remaining = n - (m + 1);
    const std::size_t lo = wmin > remaining ? wmin - remaining : 0;
    const std::size_t hi = std::min(m + 1, wmax);
    std::vector<ComplexMatrix> next(n + 1);
    for (std::size_t k = lo; k <= hi; ++k) {
      ComplexMatrix acc = ComplexMatrix::Zero(rows * rho0.rows(), rows * rho0.cols());
      if (k <= m && layer[k].size()) kron_accumulate(acc, 1.0 - q, layer[k], rho0, exec);
      if (k >= 1 && layer[k - 1].size()) kron_accumulate(acc, q, layer[k - 1], rho1, exec);
      next[k] = std::move(acc);
    }
    layer = std::move(next);
    rows *= rho0.rows();
  }

  // Last site: fold the weight filter in before the final Kronecker products.
  ComplexMatrix ends_innocent = ComplexMatrix::Zero(rows, rows);
  ComplexMatrix ends_signal = ComplexMatrix::Zero(rows, rows);
  for (std::size_t k = 0; k + 1 <= n; ++k) {
    if (!layer[k].size()) continue;
    if (wanted[k]) ends_innocent += layer[k];
    if (wanted[k + 1]) ends_signal += layer[k];
  }
  ComplexMatrix out = ComplexMatrix::Zero(total_dim, total_dim);
  kron_accumulate(out, 1.0 - q, ends_innocent, rho0, exec);
  kron_accumulate(out, q, ends_signal, rho1, exec);
  return out;
}

}  // namespace covertq::kernels
