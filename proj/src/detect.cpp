#include "covertq/detect.hpp"

#include <algorithm>

#include "covertq/covert.hpp"
#include "covertq/kernels.hpp"

namespace covertq::detect {

DetectionResult detection_at_n(const channels::WillieModel& model, const sparse::SparseSignalConfig& cfg,
                               double delta_qre) {
  if (!covert::support_contained(model.rho_pi, model.rho0)) {
    fail(ErrorKind::SupportViolation, "supp(rho_pi^W) is not contained in supp(rho_0^W): detection is trivial");
  }
  return detection_at_n(model, cfg, delta_qre, sparse::willie_state_exact(model, cfg));
}

DetectionResult detection_at_n(const channels::WillieModel& model, const sparse::SparseSignalConfig& cfg,
                               double delta_qre, const DensityOperator& rho_n) {
  if (!(delta_qre >= 0.0)) fail(ErrorKind::InvalidArgument, "delta_qre must be non-negative");
  if (!covert::support_contained(model.rho_pi, model.rho0)) {
    fail(ErrorKind::SupportViolation, "supp(rho_pi^W) is not contained in supp(rho_0^W): detection is trivial");
  }
  std::size_t dim = 1;
  for (std::size_t i = 0; i < cfg.n() && dim <= kMaxDim; ++i) dim *= model.rho0.dim();
  if (rho_n.dim() != dim) {
    fail(ErrorKind::DimensionMismatch, "precomputed n-use state has the wrong dimension");
  }
  const DensityOperator sigma_n = DensityOperator::tensor_power(model.rho0, cfg.n());

  DetectionResult r;
  r.n = cfg.n();
  r.trace_distance = covert::trace_distance(rho_n, sigma_n);
  r.p_e_willie = std::clamp(0.5 - 0.25 * r.trace_distance, 0.0, 0.5);
  r.qre_exact = covert::qre_given_support(rho_n, sigma_n, covert::tensor_power_cutoff(model.rho0, cfg.n()));
  r.qre_budget = delta_qre;
  r.covert_ok = r.qre_exact <= delta_qre;
  return r;
}

PauliDistribution pipeline_tomography(const channels::QuantumChannel& ch, std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) fail(ErrorKind::InvalidArgument, "pipeline_tomography: samples must be >= 1");
  const auto counts =
      kernels::bell_process_counts(ch, samples, seed, kernels::OnProjectionFailure::ReplaceWithMaximallyMixed);
  std::array<double, 4> p{};
  for (std::size_t j = 0; j < 4; ++j) p[j] = static_cast<double>(counts.outcomes[j]) / static_cast<double>(samples);
  return PauliDistribution::normalized(p);
}

}  // namespace covertq::detect
