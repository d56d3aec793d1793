#include <benchmark/benchmark.h>

#include <random>
#include <set>

#include "ssas/evaluation.hpp"

namespace {

ssas::RunMatrix make_matrix(ssas::Method method, std::size_t reviews, int runs,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ssas::RunMatrix matrix;
  matrix.method = method;
  matrix.n_runs = runs;
  for (std::size_t i = 0; i < reviews; ++i) {
    matrix.review_ids.push_back("r" + std::to_string(i));
    std::vector<ssas::SentimentLabel> row(
        runs, static_cast<ssas::SentimentLabel>(rng() % 3));
    if (rng() % 5 == 0) {
      row[0] = static_cast<ssas::SentimentLabel>((static_cast<int>(row[0]) + 1) % 3);
    }
    matrix.labels.push_back(std::move(row));
  }
  return matrix;
}

void StageCountsBench(benchmark::State& state) {
  const auto matrix = make_matrix(ssas::Method::Direct,
                                  static_cast<std::size_t>(state.range(0)), 10, 1);
  std::set<std::string> ids(matrix.review_ids.begin(), matrix.review_ids.end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssas::stage_counts(matrix, ids));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(StageCountsBench)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void EvaluateCellBench(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const auto direct = make_matrix(ssas::Method::Direct, n, 10, 1);
  const auto ssas_matrix = make_matrix(ssas::Method::Ssas, n, 10, 2);
  ssas::ScenarioInput input;
  input.dataset = "bench";
  std::mt19937_64 rng(3);
  for (const auto& id : direct.review_ids) {
    input.all_ids.insert(id);
    if (rng() % 10 != 0) input.without_irrelevant.insert(id);
    if (rng() % 10 < 7) input.without_irrelevant_outlier.insert(id);
  }
  for (auto& id : input.without_irrelevant_outlier) {
    if (!input.without_irrelevant.count(id)) {
      // keep the stage sets nested
      input.without_irrelevant.insert(id);
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssas::evaluate_cell(direct, ssas_matrix, input));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(EvaluateCellBench)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

}  // namespace

BENCHMARK_MAIN();
