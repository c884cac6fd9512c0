#include "covertq/rates.hpp"

#include <algorithm>
#include <cmath>

namespace covertq::rates {

namespace {

void check_common(std::size_t n, double vartheta, double c_q, double delta_qre) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "n must be positive");
  if (!(vartheta > 0.0 && vartheta < 1.0)) fail(ErrorKind::InvalidArgument, "vartheta must be in (0,1)");
  if (!(c_q > 0.0)) fail(ErrorKind::InvalidArgument, "c_q must be positive");
  if (!(delta_qre > 0.0)) fail(ErrorKind::InvalidArgument, "delta_qre must be positive");
}

double lower_bound(std::size_t n, double vartheta, double c_q, double delta_qre, double rate) {
  if (rate == 0.0) return 0.0;  // also keeps an unbounded c_q from producing NaN
  return (1.0 - vartheta) * std::sqrt(static_cast<double>(n)) * c_q * rate * std::sqrt(delta_qre);
}

}  // namespace

double entropy4(const PauliDistribution& p) {
  double h = 0.0;
  for (double v : p.values())
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double hashing_rate(const PauliDistribution& p) { return std::max(0.0, 1.0 - entropy4(p)); }

double distillation_rate(const PauliDistribution& q_tw, double p_f) {
  if (!(p_f >= 0.0 && p_f <= 1.0)) fail(ErrorKind::InvalidArgument, "p_f must be in [0,1]");
  return (1.0 - p_f) * hashing_rate(q_tw);
}

ThroughputBound theorem1_bound(std::size_t n, double vartheta, double c_q, double delta_qre,
                               const PauliDistribution& p) {
  check_common(n, vartheta, c_q, delta_qre);
  const double rate = hashing_rate(p);
  return {n, vartheta, c_q, delta_qre, rate, lower_bound(n, vartheta, c_q, delta_qre, rate), std::nullopt};
}

ThroughputBound theorem2_bound(std::size_t n, double vartheta, double c_q, double delta_qre,
                               const PauliDistribution& q_tw, double p_f) {
  check_common(n, vartheta, c_q, delta_qre);
  const double rate = distillation_rate(q_tw, p_f);
  const double bits = (1.0 + vartheta) * std::sqrt(static_cast<double>(n)) * c_q * (1.0 + 2.0 * rate) *
                      std::sqrt(delta_qre);
  return {n, vartheta, c_q, delta_qre, rate, lower_bound(n, vartheta, c_q, delta_qre, rate), bits};
}

double classical_bits_for_realization(std::size_t weight, double distill_rate) {
  const auto w = static_cast<double>(weight);
  return w + 2.0 * w * distill_rate;
}

}  // namespace covertq::rates
