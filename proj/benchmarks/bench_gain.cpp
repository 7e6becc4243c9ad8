#include <benchmark/benchmark.h>

#include "css/bench.hpp"
#include "css/gain.hpp"
#include "css/sem.hpp"

namespace {

// Step-0 cost of the graph-based strategies on a 10-node graph; independent
// of the data size by construction.
void BM_SelectLnsky(benchmark::State& state) {
  css::CausalGraph g = css::generate_random_dag(int(state.range(0)), 0.3, 99);
  css::PreferenceSpec pref;
  pref.attributes = {g.node_names()[0], g.node_names()[1]};
  pref.directions = {css::Direction::min, css::Direction::min};
  css::SelectOptions opts;
  opts.strategy = css::GainStrategy::lnsky;
  for (auto _ : state) {
    auto report = css::select_conditioning_set(nullptr, &g, pref, opts);
    benchmark::DoNotOptimize(report.gain);
  }
}

void BM_SelectDdsky(benchmark::State& state) {
  css::CausalGraph g = css::generate_random_dag(6, 0.4, 5);
  auto ds = css::generate_sem(g, std::size_t(state.range(0)), 11);
  css::PreferenceSpec pref;
  pref.attributes = {g.node_names()[0], g.node_names()[1]};
  pref.directions = {css::Direction::min, css::Direction::min};
  css::SelectOptions opts;
  opts.strategy = css::GainStrategy::ddsky;
  opts.max_subset_size = 1;
  for (auto _ : state) {
    auto report = css::select_conditioning_set(&ds, nullptr, pref, opts);
    benchmark::DoNotOptimize(report.gain);
  }
}

}  // namespace

BENCHMARK(BM_SelectLnsky)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelectDdsky)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
