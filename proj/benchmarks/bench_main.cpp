#include <benchmark/benchmark.h>

#include "qlest/combinatorics.hpp"
#include "qlest/distributions.hpp"
#include "qlest/estimators.hpp"
#include "qlest/evaluation.hpp"
#include "qlest/simulator.hpp"

namespace {

void BM_Binom(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(qlest::binom(n, n / 2));
}
BENCHMARK(BM_Binom)->Arg(20)->Arg(91)->Arg(400);

void BM_PmfExact(benchmark::State& state) {
  const qlest::QueueObservation obs{4, 2, 20, state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(qlest::queue_pmf_time_vector(obs));
}
BENCHMARK(BM_PmfExact)->Arg(45)->Arg(90);

void BM_PmfDouble(benchmark::State& state) {
  const qlest::QueueObservation obs{4, 2, 20, state.range(0)};
  for (auto _ : state) benchmark::DoNotOptimize(qlest::queue_pmf_time_double(obs));
}
BENCHMARK(BM_PmfDouble)->Arg(45)->Arg(90);

void BM_NpEst1(benchmark::State& state) {
  const qlest::QueueObservation obs{4, 2, 20, 45};
  for (auto _ : state) benchmark::DoNotOptimize(qlest::np_est1(obs));
}
BENCHMARK(BM_NpEst1);

void BM_IdentitySweep(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qlest::verify_theorem1(state.range(0)));
}
BENCHMARK(BM_IdentitySweep)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Evaluation(benchmark::State& state) {
  qlest::SimConfig sim;
  sim.seed = 7;
  qlest::CorpusLayout layout;
  layout.cycles = 250;
  const auto records = qlest::simulate_records(sim, layout);
  qlest::RunConfig cfg;
  cfg.seeds = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(qlest::run_evaluation(records, cfg));
}
BENCHMARK(BM_Evaluation)->Arg(10)->Arg(100)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
