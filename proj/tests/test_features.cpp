#include <doctest.h>

#include <cmath>

#include "ssas/features.hpp"
#include "support/oracles.hpp"

using namespace ssas;

TEST_CASE("empty text yields an empty vector") {
  CHECK(extract_features("").empty());
  CHECK(extract_features("   \t\n").empty());
}

TEST_CASE("weights are proportional to term frequency") {
  const auto vec = extract_features("fast fast shipping");
  CHECK(vec.weight("fast") == doctest::Approx(2.0 * vec.weight("shipping")));
  CHECK(vec.weight("shipping") == doctest::Approx(1.0));
}

TEST_CASE("case folding and stop word removal") {
  const auto vec = extract_features("The Product IS the product");
  CHECK(vec.weight("product") == doctest::Approx(2.0));
  CHECK(vec.weight("the") == 0.0);
  CHECK(vec.weight("is") == 0.0);
}

TEST_CASE("three-sentence fixture matches a hand-counted term table") {
  const char* text =
      "The battery lasts two days. Battery charging is quick! "
      "I wish the battery indicator showed charging progress.";
  const auto vec = extract_features(text);
  // Hand count: battery x3, charging x2, lasts, two, days, quick, wish,
  // indicator, showed, progress once each; stop words dropped.
  CHECK(vec.weight("battery") == doctest::Approx(3.0));
  CHECK(vec.weight("charging") == doctest::Approx(2.0));
  for (const char* once : {"lasts", "two", "days", "quick", "wish", "indicator",
                           "showed", "progress"}) {
    CAPTURE(once);
    CHECK(vec.weight(once) == doctest::Approx(1.0));
  }
  CHECK(vec.size() == 10);

  // And the whole vector equals the independent counting oracle.
  const auto counts = oracle::term_counts(
      text, {"the", "is", "i"});
  for (const auto& [term, weight] : counts) {
    CHECK(vec.weight(term) == doctest::Approx(weight));
  }
  CHECK(vec.size() == counts.size());
}

TEST_CASE("cosine similarity basics") {
  FeatureVector a, b;
  a.add("x", 1.0);
  a.add("y", 2.0);
  b.add("x", 1.0);
  b.add("y", 2.0);
  CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
  CHECK(cosine_similarity(a, b) == doctest::Approx(1.0));

  FeatureVector c;
  c.add("z", 3.0);
  CHECK(cosine_similarity(a, c) == doctest::Approx(0.0));

  FeatureVector ab, just_a;
  ab.add("a", 1.0);
  ab.add("b", 1.0);
  just_a.add("a", 1.0);
  CHECK(cosine_similarity(ab, just_a) == doctest::Approx(1.0 / std::sqrt(2.0)));

  CHECK(cosine_similarity(FeatureVector{}, a) == 0.0);
}

TEST_CASE("sentence splitting keeps order and trims") {
  const auto sentences = split_sentences("First one. Second!  Third thing?\nTail");
  REQUIRE(sentences.size() == 4);
  CHECK(sentences[0] == "First one.");
  CHECK(sentences[1] == "Second!");
  CHECK(sentences[2] == "Third thing?");
  CHECK(sentences[3] == "Tail");
}

TEST_CASE("token counting is whitespace based") {
  CHECK(count_tokens("") == 0);
  CHECK(count_tokens("one") == 1);
  CHECK(count_tokens("  spaced   out words ") == 3);
}
