#include "covertq/reference.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace covertq::reference {

namespace {

void require_enumerable(std::size_t n) {
  if (n > 24) fail(ErrorKind::DimensionCap, "reference enumeration limited to n <= 24");
}

}  // namespace

ComplexMatrix willie_state_enumerated(const channels::WillieModel& model, const sparse::SparseSignalConfig& cfg) {
  const std::size_t n = cfg.n();
  require_enumerable(n);
  const double pa = sparse::weight_set_prob(cfg);
  ComplexMatrix acc;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const auto w = static_cast<std::size_t>(std::popcount(x));
    if (!cfg.contains(w)) continue;
    const double px = std::pow(cfg.q(), static_cast<double>(w)) *
                      std::pow(1.0 - cfg.q(), static_cast<double>(n - w)) / pa;
    ComplexMatrix product = ComplexMatrix::Ones(1, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const bool signal = (x >> (n - 1 - i)) & 1U;  // site 0 is the leftmost factor
      product = linops::tensor(product, signal ? model.rho_pi.matrix() : model.rho0.matrix());
    }
    if (acc.size() == 0) acc = ComplexMatrix::Zero(product.rows(), product.cols());
    acc += px * product;
  }
  return acc;
}

double weight_set_prob_enumerated(const sparse::SparseSignalConfig& cfg) {
  require_enumerable(cfg.n());
  double p = 0.0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << cfg.n()); ++x) {
    const auto w = static_cast<std::size_t>(std::popcount(x));
    if (cfg.contains(w)) {
      p += std::pow(cfg.q(), static_cast<double>(w)) * std::pow(1.0 - cfg.q(), static_cast<double>(cfg.n() - w));
    }
  }
  return p;
}

std::vector<double> weight_histogram_enumerated(std::size_t n, double q) {
  require_enumerable(n);
  std::vector<double> h(n + 1, 0.0);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    const auto w = static_cast<std::size_t>(std::popcount(x));
    h[w] += std::pow(q, static_cast<double>(w)) * std::pow(1.0 - q, static_cast<double>(n - w));
  }
  return h;
}

kernels::BellCounts bell_process_counts_serial(const channels::QuantumChannel& ch, std::uint64_t samples,
                                               std::uint64_t seed, kernels::OnProjectionFailure policy) {
  return kernels::bell_process_counts(ch, samples, seed, policy, kernels::Execution::Serial);
}

}  // namespace covertq::reference
