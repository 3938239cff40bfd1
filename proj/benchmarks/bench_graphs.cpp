#include <benchmark/benchmark.h>

#include "usng/experiments.hpp"
#include "usng/models.hpp"
#include "usng/oracle.hpp"

using namespace usng;

namespace {

void BM_GeneratePaFixed(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate(PaFixed{2, -1.0}, n, {1, 0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GeneratePaFixed)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_GenerateChungLu(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  ChungLu spec;
  spec.weights.gamma = 2.0 / 3.0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(spec, n, {2, 0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GenerateChungLu)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_PairQueries(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const auto g = generate(PaFixed{2, -1.0}, n, {3, 0});
  std::uint64_t round = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_distances(g, 1000, {3, ++round}));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_PairQueries)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_OracleStep(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  const KernelMatrix km(KernelParams{0.6, 1.0, n, Family::PA});
  std::vector<double> q(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(km.multiply_truncated(q, n / 10));
}
BENCHMARK(BM_OracleStep)->Arg(1000)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
