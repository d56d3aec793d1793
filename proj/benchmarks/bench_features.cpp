#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "ssas/features.hpp"

namespace {

std::string make_text(std::size_t words, std::uint64_t seed) {
  static const char* vocab[] = {"shipping", "battery", "screen",  "flavor",
                                "service",  "quality", "arrived", "charge",
                                "bright",   "sweet",   "staff",   "refund"};
  std::mt19937_64 rng(seed);
  std::string text;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) text.push_back(' ');
    text += vocab[rng() % std::size(vocab)];
  }
  return text;
}

void ExtractFeatures(benchmark::State& state) {
  const std::string text = make_text(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    auto vec = ssas::extract_features(text);
    benchmark::DoNotOptimize(vec);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(ExtractFeatures)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void CosineSimilarity(benchmark::State& state) {
  const auto a = ssas::extract_features(make_text(200, 2));
  const auto b = ssas::extract_features(make_text(200, 3));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssas::cosine_similarity(a, b));
  }
}
BENCHMARK(CosineSimilarity);

}  // namespace

BENCHMARK_MAIN();
