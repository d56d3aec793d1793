#pragma once

// Seeded generators shared by the unit, property and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "ssas/corpus.hpp"

namespace synthetic {

inline const std::vector<std::vector<std::string>>& topic_vocabularies() {
  static const std::vector<std::vector<std::string>> topics = {
      {"shipping", "delivery", "package", "arrived", "box", "fast", "courier"},
      {"battery", "charge", "power", "drain", "lasts", "charger", "overnight"},
      {"screen", "display", "bright", "pixels", "color", "glare", "resolution"},
      {"flavor", "taste", "sweet", "bitter", "fresh", "aroma", "spice"},
      {"service", "staff", "friendly", "helpful", "refund", "support", "response"},
  };
  return topics;
}

/// Reviews drawn from a handful of topic vocabularies plus a slice of
/// gibberish ones that share no terms with anything.
inline ssas::Corpus make_corpus(std::uint64_t seed, std::size_t n_reviews,
                                std::size_t n_entities = 8,
                                double gibberish_fraction = 0.1) {
  std::mt19937_64 rng(seed);
  const auto& topics = topic_vocabularies();
  std::uniform_int_distribution<std::size_t> topic_dist(0, topics.size() - 1);
  std::uniform_int_distribution<std::size_t> entity_dist(0, n_entities - 1);
  std::uniform_int_distribution<int> words_dist(6, 18);
  std::uniform_int_distribution<int> year_dist(2019, 2022);
  std::uniform_int_distribution<int> month_dist(1, 12);
  std::uniform_int_distribution<int> day_dist(1, 28);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  ssas::Corpus corpus;
  corpus.dataset_name = "synthetic";
  for (std::size_t i = 0; i < n_reviews; ++i) {
    ssas::Review review;
    review.id = "r" + std::to_string(i);
    review.entity_id = "e" + std::to_string(entity_dist(rng));
    char ts[16];
    std::snprintf(ts, sizeof(ts), "%04d-%02d-%02d", year_dist(rng), month_dist(rng),
                  day_dist(rng));
    review.timestamp = ts;

    std::string text;
    const int words = words_dist(rng);
    if (unit(rng) < gibberish_fraction) {
      for (int w = 0; w < words; ++w) {
        if (w) text.push_back(' ');
        text += "zq" + std::to_string(i) + "x" + std::to_string(w);
      }
    } else {
      const auto& vocab = topics[topic_dist(rng)];
      std::uniform_int_distribution<std::size_t> word_dist(0, vocab.size() - 1);
      for (int w = 0; w < words; ++w) {
        if (w) text.push_back(' ');
        text += vocab[word_dist(rng)];
        if (w % 5 == 4) text.push_back('.');
      }
    }
    review.text = text;
    corpus.reviews.push_back(std::move(review));
  }
  corpus.rebuild_index();
  ssas::assign_quarters(corpus);
  return corpus;
}

inline std::string corpus_to_jsonl_file(const ssas::Corpus& corpus,
                                        const std::string& path) {
  ssas::save_corpus_jsonl(corpus, path);
  return path;
}

}  // namespace synthetic
