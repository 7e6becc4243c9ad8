#include <benchmark/benchmark.h>

#include "css/pipeline.hpp"
#include "css/sem.hpp"
#include "css/skyline.hpp"

namespace {

css::CausalGraph misaligned() {
  return css::CausalGraph({"C", "X", "Y"},
                          {{"C", "X", 1.0, 1.0}, {"C", "Y", -1.0, 1.0}, {"X", "Y", -1.0, 1.0}});
}

css::PreferenceSpec pref_xy() {
  css::PreferenceSpec p;
  p.attributes = {"X", "Y"};
  p.directions = {css::Direction::min, css::Direction::min};
  return p;
}

const css::Dataset& dataset(std::size_t n) {
  static std::map<std::size_t, css::Dataset> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, css::generate_sem(misaligned(), n, 7)).first;
  return it->second;
}

void run_algo(benchmark::State& state, css::SkylineAlgo algo) {
  const auto& ds = dataset(std::size_t(state.range(0)));
  css::CanonicalView view(ds, pref_xy());
  std::uint64_t checks = 0;
  for (auto _ : state) {
    auto res = css::run_skyline(algo, view);
    checks = res.dominance_checks;
    benchmark::DoNotOptimize(res.row_indices.data());
  }
  state.counters["dominance_checks"] = double(checks);
}

void BM_Bnl(benchmark::State& state) { run_algo(state, css::SkylineAlgo::bnl); }
void BM_Sfs(benchmark::State& state) { run_algo(state, css::SkylineAlgo::sfs); }
void BM_Salsa(benchmark::State& state) { run_algo(state, css::SkylineAlgo::salsa); }
void BM_Bbs(benchmark::State& state) { run_algo(state, css::SkylineAlgo::bbs); }
void BM_Dc(benchmark::State& state) { run_algo(state, css::SkylineAlgo::dc); }

void BM_CssSfs(benchmark::State& state) {
  const auto& ds = dataset(std::size_t(state.range(0)));
  css::GainReport plan;
  plan.strategy = "lnsky";
  plan.conditioning_set = {"C"};
  css::CssOptions opts;
  opts.base_algo = css::SkylineAlgo::sfs;
  opts.m = 10;
  std::uint64_t checks = 0;
  for (auto _ : state) {
    auto res = css::css_run(ds, pref_xy(), plan, opts);
    checks = res.skyline.dominance_checks;
    benchmark::DoNotOptimize(res.skyline.row_indices.data());
  }
  state.counters["dominance_checks"] = double(checks);
}

}  // namespace

BENCHMARK(BM_Bnl)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sfs)->Arg(50000)->Arg(200000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Salsa)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Bbs)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dc)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CssSfs)->Arg(50000)->Arg(200000)->Unit(benchmark::kMillisecond);
