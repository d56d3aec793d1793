#include <benchmark/benchmark.h>

#include "ssas/hierarchy.hpp"
#include "ssas/scoring.hpp"
#include "../tests/support/synthetic.hpp"

namespace {

void BuildHierarchy(benchmark::State& state) {
  const ssas::Corpus corpus =
      synthetic::make_corpus(7, static_cast<std::size_t>(state.range(0)));
  ssas::HierarchyConfig config;
  for (auto _ : state) {
    auto result = ssas::build_hierarchy(corpus, config);
    benchmark::DoNotOptimize(result);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BuildHierarchy)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void ComputeAllSnr(benchmark::State& state) {
  const ssas::Corpus corpus =
      synthetic::make_corpus(7, static_cast<std::size_t>(state.range(0)));
  ssas::HierarchyConfig config;
  auto [hierarchy, assignments] = ssas::build_hierarchy(corpus, config);
  for (auto _ : state) {
    auto scores = ssas::compute_all_snr(corpus, assignments, hierarchy);
    benchmark::DoNotOptimize(scores);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(ComputeAllSnr)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
