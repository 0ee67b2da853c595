// Microbenchmarks for the hot paths: entropy evaluation, eta optimization,
// tail bounds, protocol simulation, and the CSV analysis pipeline.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <sstream>

#include "qcap/analysis.hpp"
#include "qcap/bounds.hpp"
#include "qcap/channels.hpp"
#include "qcap/math.hpp"
#include "qcap/protocol.hpp"

namespace {

// Shared bursty-channel transcript so file-pipeline benchmarks measure the
// pipeline, not the simulation.
const qcap::RecordFile& million_row_file() {
  static const qcap::RecordFile file = [] {
    const qcap::ChannelPtr channel = qcap::parse_channel_spec("ge:0.01,0.1,0.01,0.3");
    return qcap::to_record_file(
        qcap::run_estimation(*channel, 1000000, 42).transcript);
  }();
  return file;
}

void BM_BinaryEntropy(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcap::binary_entropy(x));
    x = x < 0.49 ? x + 1e-4 : 0.01;
  }
}
BENCHMARK(BM_BinaryEntropy);

void BM_BoundAtEta(benchmark::State& state) {
  qcap::BoundParams params{500000, 500000,
                           0,      1.0,
                           0.05,   0.05,
                           1e-6,   qcap::PassProb::from_prob(0.5)};
  const double eta = 0.5 * std::sqrt(params.epsilon / 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qcap::bound_at_eta(params, eta, qcap::BoundVariant::estimation));
  }
}
BENCHMARK(BM_BoundAtEta);

void BM_OptimizeBound(benchmark::State& state) {
  const std::int64_t half = state.range(0) / 2;
  qcap::BoundParams params{half, half, 0,    1.0,
                           0.05, 0.05, 1e-6, qcap::PassProb::from_prob(0.5)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qcap::optimize_bound(params, qcap::BoundVariant::estimation));
  }
}
BENCHMARK(BM_OptimizeBound)->Arg(10000)->Arg(100000000);

void BM_GeneralEstimationBound(benchmark::State& state) {
  const qcap::PassProb half = qcap::PassProb::from_prob(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcap::general_estimation_bound(
        1000000, 10000, 1.0, 0.02, 0.02, 1e-6, half, half));
  }
}
BENCHMARK(BM_GeneralEstimationBound);

void BM_SerflingTail(benchmark::State& state) {
  double nu = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcap::serfling_tail(500000, 500000, nu));
    nu = nu < 3.0 ? nu + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_SerflingTail);

void BM_HypergeometricTailExact(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcap::hypergeometric_tail_exact(12, 12, 12, 0.5));
  }
}
BENCHMARK(BM_HypergeometricTailExact);

void BM_RunEstimation(benchmark::State& state) {
  const qcap::ChannelPtr channel = qcap::parse_channel_spec("dephasing:0.1");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcap::run_estimation(*channel, 100000, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_RunEstimation)->Unit(benchmark::kMillisecond);

void BM_RunEstimationBursty(benchmark::State& state) {
  const qcap::ChannelPtr channel = qcap::parse_channel_spec("ge:0.01,0.1,0.01,0.3");
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcap::run_estimation(*channel, 100000, ++seed));
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_RunEstimationBursty)->Unit(benchmark::kMillisecond);

void BM_IngestCsv(benchmark::State& state) {
  std::ostringstream serialized;
  qcap::write_record_csv(million_row_file(), serialized);
  const std::string text = serialized.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(qcap::ingest(in));
  }
  state.SetBytesProcessed(state.iterations() *
                          static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_IngestCsv)->Unit(benchmark::kMillisecond);

void BM_SegmentRates(benchmark::State& state) {
  const qcap::RecordFile& file = million_row_file();
  for (auto _ : state) {
    benchmark::DoNotOptimize(qcap::segment_rates(file, 100, 1.0));
  }
}
BENCHMARK(BM_SegmentRates)->Unit(benchmark::kMillisecond);

void BM_BreakpointBounds(benchmark::State& state) {
  const qcap::RecordFile& file = million_row_file();
  const qcap::PassProb half = qcap::PassProb::from_prob(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        qcap::breakpoint_bounds(file, state.range(0), 1.0, 1e-6, half));
  }
}
BENCHMARK(BM_BreakpointBounds)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
