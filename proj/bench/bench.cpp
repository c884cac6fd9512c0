// Parallel kernels against their serial and enumerating counterparts.
//   ./build/bench/covertq_bench --benchmark_filter=Bell

#include <benchmark/benchmark.h>

#include "covertq/channels.hpp"
#include "covertq/kernels.hpp"
#include "covertq/reference.hpp"
#include "covertq/sparse.hpp"

using namespace covertq;

namespace {

const channels::QuantumChannel& leak() {
  static const auto ch = channels::qubit_into_qudit_leak(0.25);
  return ch;
}

channels::WillieModel model() {
  const double r0[] = {0.9, 0.1}, rp[] = {0.5, 0.5};
  return {DensityOperator::diagonal(r0), DensityOperator::diagonal(rp)};
}

void BM_BellCounts(benchmark::State& state, kernels::Execution exec) {
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto c = kernels::bell_process_counts(leak(), samples, 7, kernels::OnProjectionFailure::Discard, exec);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples));
}

void BM_BellCountsReference(benchmark::State& state) {
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto c = reference::bell_process_counts_serial(leak(), samples, 7, kernels::OnProjectionFailure::Discard);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(samples));
}

void BM_PatternMixture(benchmark::State& state, kernels::Execution exec) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = model();
  const sparse::SparseSignalConfig cfg(n, 0.3, 0.2);
  for (auto _ : state) {
    auto rho = kernels::weighted_pattern_mixture(m.rho0.matrix(), m.rho_pi.matrix(), cfg.q(), n, cfg.weights(), exec);
    benchmark::DoNotOptimize(rho.data());
  }
}

void BM_PatternEnumeration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = model();
  const sparse::SparseSignalConfig cfg(n, 0.3, 0.2);
  for (auto _ : state) {
    auto rho = reference::willie_state_enumerated(m, cfg);
    benchmark::DoNotOptimize(rho.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_BellCounts, parallel, kernels::Execution::Parallel)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK_CAPTURE(BM_BellCounts, serial, kernels::Execution::Serial)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_BellCountsReference)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK_CAPTURE(BM_PatternMixture, parallel, kernels::Execution::Parallel)->DenseRange(4, 8, 2);
BENCHMARK_CAPTURE(BM_PatternMixture, serial, kernels::Execution::Serial)->DenseRange(4, 8, 2);
BENCHMARK(BM_PatternEnumeration)->DenseRange(4, 8, 2);

BENCHMARK_MAIN();
