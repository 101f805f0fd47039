#include <benchmark/benchmark.h>

#include "robscore/bbm_rs.hpp"
#include "robscore/matching.hpp"
#include "robscore/random.hpp"
#include "robscore/robustness.hpp"
#include "robscore/separation.hpp"
#include "robscore/stumps.hpp"

using namespace robscore;

namespace {

void BM_BestStump(benchmark::State& state) {
  const auto ds = gen_linear_dataset(10, 0.05, static_cast<std::size_t>(state.range(0)), 1).data;
  const auto wds = WeightedDataset::uniform(ds);
  for (auto _ : state) benchmark::DoNotOptimize(best_stump(wds));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BestStump)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_TrainBbmRs(benchmark::State& state) {
  const auto ds = gen_linear_dataset(10, 0.05, 2000, 2, SampleDomain::kUnit).data;
  BbmRsConfig cfg;
  cfg.rounds = static_cast<std::size_t>(state.range(0));
  cfg.tau = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(train_bbm_rs(ds, cfg));
}
BENCHMARK(BM_TrainBbmRs)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_HopcroftKarp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  BipartiteGraph g(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    for (int e = 0; e < 4; ++e) g.add_edge(l, uniform_index(rng, n));
  }
  for (auto _ : state) benchmark::DoNotOptimize(maximum_matching(g));
}
BENCHMARK(BM_HopcroftKarp)->RangeMultiplier(4)->Range(1024, 65536);

void BM_RSeparateness(benchmark::State& state) {
  const auto ds = gen_linear_dataset(5, 0.02, static_cast<std::size_t>(state.range(0)), 4, SampleDomain::kUnit).data;
  for (auto _ : state) benchmark::DoNotOptimize(r_separateness(ds, 0.01));
}
BENCHMARK(BM_RSeparateness)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_MaxMargin(benchmark::State& state) {
  const auto ds = gen_linear_dataset(5, 0.1, static_cast<std::size_t>(state.range(0)), 5).data;
  for (auto _ : state) benchmark::DoNotOptimize(max_l1_margin(ds));
}
BENCHMARK(BM_MaxMargin)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ExactEr(benchmark::State& state) {
  const auto ds = gen_linear_dataset(10, 0.05, 2000, 6, SampleDomain::kUnit).data;
  BbmRsConfig cfg;
  cfg.rounds = 30;
  const auto model = Model(train_bbm_rs(ds, cfg).model);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_robustness(model, ds, 500, 7));
}
BENCHMARK(BM_ExactEr)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
