#include <doctest.h>

#include <algorithm>
#include <set>

#include "ssas/context.hpp"
#include "support/synthetic.hpp"

using namespace ssas;

namespace {

FeatureVector profile(std::initializer_list<std::pair<const char*, double>> terms) {
  FeatureVector vec;
  for (const auto& [term, w] : terms) vec.add(term, w);
  return vec;
}

}  // namespace

TEST_CASE("single one-sentence review summarizes to itself") {
  const ExtractiveSummarizer summarizer;
  const auto summary = summarize_cluster(
      3, {{"r1", "The battery lasts forever."}}, profile({{"battery", 2.0}}), 120,
      summarizer);
  CHECK(summary.text == "The battery lasts forever.");
  CHECK(summary.level == SummaryLevel::Cluster);
  CHECK(summary.node_id == 3);
  CHECK(summary.source_ids == std::vector<std::string>{"r1"});
  CHECK(summary.token_budget == 120);
}

TEST_CASE("selection equals the score-and-sort oracle over all sentences") {
  const ExtractiveSummarizer summarizer;
  const FeatureVector keywords =
      profile({{"battery", 3.0}, {"charging", 2.0}, {"screen", 1.0}});
  const std::vector<SourceText> members = {
      {"r1", "Battery life is superb. The manual was confusing."},
      {"r2", "Charging takes an hour. Packaging looked nice."},
      {"r3", "Screen glare bothers me. Battery charging works."},
      {"r4", "Totally unrelated sentence here."},
      {"r5", "Battery battery battery. Nothing else matters."},
  };

  // Oracle: score each sentence independently, sort, take while it fits.
  struct Scored {
    std::string text;
    double score;
    std::size_t position;
    std::size_t tokens;
  };
  std::vector<Scored> scored;
  std::size_t position = 0;
  for (const auto& member : members) {
    for (const auto& sentence : split_sentences(member.text)) {
      double score = 0.0;
      for (const auto& token : tokenize(sentence)) score += keywords.weight(token);
      scored.push_back({sentence, score, position++, count_tokens(sentence)});
    }
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.position < b.position;
  });
  const int budget = 14;
  std::set<std::string> expected;
  std::size_t remaining = budget;
  std::set<std::string> seen;
  for (const auto& s : scored) {
    if (s.tokens <= remaining && seen.insert(s.text).second) {
      expected.insert(s.text);
      remaining -= s.tokens;
    }
  }

  const auto summary =
      summarize_cluster(0, members, keywords, budget, summarizer);
  // Every selected sentence must be one of the oracle's picks and vice versa.
  std::set<std::string> got;
  for (const auto& sentence : split_sentences(summary.text)) got.insert(sentence);
  CHECK(got == expected);
}

TEST_CASE("empty member list is an error") {
  const ExtractiveSummarizer summarizer;
  CHECK_THROWS_AS(
      summarize_cluster(0, {}, FeatureVector{}, 100, summarizer),
      std::invalid_argument);
}

TEST_CASE("budget compliance at every level") {
  const ExtractiveSummarizer summarizer;
  const std::vector<SourceText> members = {
      {"r1", "alpha beta gamma delta epsilon zeta eta theta."},
      {"r2", "iota kappa lambda mu nu xi omicron pi."},
  };
  for (int budget : {1, 3, 5, 9, 50}) {
    const auto summary = summarize_cluster(0, members,
                                           profile({{"alpha", 1.0}}), budget,
                                           summarizer);
    CHECK(count_tokens(summary.text) <= static_cast<std::size_t>(budget));
    CHECK(!summary.text.empty());
  }
}

TEST_CASE("story summaries require cluster children") {
  const ExtractiveSummarizer summarizer;
  ContextSummary cluster_summary;
  cluster_summary.level = SummaryLevel::Cluster;
  cluster_summary.node_id = 4;
  cluster_summary.text = "Battery praise everywhere.";

  SUBCASE("single child story") {
    const auto story = summarize_story(9, {cluster_summary},
                                       profile({{"battery", 1.0}}), 50, summarizer);
    CHECK(story.level == SummaryLevel::Story);
    CHECK(story.text == "Battery praise everywhere.");
    CHECK(story.source_ids == std::vector<std::string>{"4"});
  }
  SUBCASE("wrong child level is rejected") {
    ContextSummary theme_summary = cluster_summary;
    theme_summary.level = SummaryLevel::Theme;
    CHECK_THROWS_AS(summarize_story(9, {theme_summary}, FeatureVector{}, 50,
                                    summarizer),
                    std::invalid_argument);
  }
  SUBCASE("no children is rejected") {
    CHECK_THROWS_AS(summarize_story(9, {}, FeatureVector{}, 50, summarizer),
                    std::invalid_argument);
  }
}

TEST_CASE("story summary covers every child when budget allows") {
  const ExtractiveSummarizer summarizer;
  ContextSummary a, b, c;
  a.level = b.level = c.level = SummaryLevel::Cluster;
  a.node_id = 0;
  a.text = "Shipping was lightning fast.";
  b.node_id = 1;
  b.text = "Battery easily lasts a week.";
  c.node_id = 2;
  c.text = "Flavor is rich and sweet.";
  // Keywords heavily favor one child; coverage must still include all three.
  const auto story = summarize_story(
      0, {a, b, c}, profile({{"shipping", 10.0}, {"fast", 10.0}}), 60, summarizer);
  CHECK(story.text.find("Shipping was lightning fast.") != std::string::npos);
  CHECK(story.text.find("Battery easily lasts a week.") != std::string::npos);
  CHECK(story.text.find("Flavor is rich and sweet.") != std::string::npos);
  CHECK(story.source_ids == std::vector<std::string>{"0", "1", "2"});
}

TEST_CASE("theme summaries require story children and track source ids") {
  const ExtractiveSummarizer summarizer;
  ContextSummary s1, s2;
  s1.level = s2.level = SummaryLevel::Story;
  s1.node_id = 11;
  s1.text = "Couriers praised for speed.";
  s2.node_id = 12;
  s2.text = "Packaging often damaged.";

  const auto solo = summarize_theme(2, {s1}, profile({{"couriers", 1.0}}), 80,
                                    summarizer);
  CHECK(solo.text == "Couriers praised for speed.");

  const auto theme = summarize_theme(2, {s1, s2}, profile({{"couriers", 1.0}}),
                                     80, summarizer);
  CHECK(theme.level == SummaryLevel::Theme);
  CHECK(theme.source_ids == std::vector<std::string>{"11", "12"});

  ContextSummary wrong = s1;
  wrong.level = SummaryLevel::Cluster;
  CHECK_THROWS_AS(summarize_theme(2, {wrong}, FeatureVector{}, 80, summarizer),
                  std::invalid_argument);
}

TEST_CASE("full pipeline is a pure function of cluster summaries") {
  const Corpus corpus = synthetic::make_corpus(21, 80);
  auto [hierarchy, assignments] = build_hierarchy(corpus, HierarchyConfig{});
  const ExtractiveSummarizer summarizer;
  const SummaryBudgets budgets;

  const SummarySet first =
      summarize_hierarchy(corpus, hierarchy, budgets, summarizer);

  // Rebuild stories from the cached cluster summaries, then themes from the
  // rebuilt story summaries; nothing re-reads the raw reviews.
  SummarySet rebuilt;
  rebuilt.cluster = first.cluster;
  for (const auto& theme : hierarchy.themes) {
    if (theme.id < 0) continue;
    for (const auto& story : theme.stories) {
      if (story.id < 0) continue;
      std::vector<ContextSummary> children;
      for (const auto& cluster : story.clusters) {
        if (cluster.id < 0) continue;
        children.push_back(rebuilt.cluster.at(cluster.id));
      }
      if (children.empty()) {
        // Member-level fallback node; its summary is part of the cache.
        rebuilt.story[story.id] = first.story.at(story.id);
      } else {
        rebuilt.story[story.id] = summarize_story(
            story.id, children, story.centroid, budgets.story, summarizer);
      }
    }
  }
  for (const auto& theme : hierarchy.themes) {
    if (theme.id < 0) continue;
    std::vector<ContextSummary> children;
    for (const auto& story : theme.stories) {
      if (story.id >= 0) children.push_back(rebuilt.story.at(story.id));
    }
    if (children.empty()) {
      rebuilt.theme[theme.id] = first.theme.at(theme.id);
    } else {
      rebuilt.theme[theme.id] = summarize_theme(
          theme.id, children, theme.keyword_profile, budgets.theme, summarizer);
    }
  }

  CHECK(summaries_to_json(rebuilt) == summaries_to_json(first));
}

TEST_CASE("every real node gets a summary even when its children are all -1") {
  // Two reviews similar enough for one theme and story but not one cluster:
  // overlap 2 of 4 terms -> cosine 0.5, between the story and cluster bars.
  Corpus corpus;
  corpus.dataset_name = "fallback";
  corpus.reviews.push_back(
      Review{"a", "e0", "alpha beta gamma delta", "2020-01-01", "2020-Q1"});
  corpus.reviews.push_back(
      Review{"b", "e0", "alpha beta epsilon zeta", "2020-01-01", "2020-Q1"});
  corpus.rebuild_index();

  HierarchyConfig config;
  config.theme_threshold = 0.1;
  config.story_threshold = 0.3;
  config.cluster_threshold = 0.9;
  auto [hierarchy, assignments] = build_hierarchy(corpus, config);
  REQUIRE(hierarchy.theme_count() == 1);
  REQUIRE(hierarchy.story_count() == 1);
  CHECK(hierarchy.cluster_count() == 0);
  for (const auto& a : assignments) {
    CHECK(a.story_id == 0);
    CHECK(a.cluster_id == -1);
  }

  const ExtractiveSummarizer summarizer;
  const SummarySet set =
      summarize_hierarchy(corpus, hierarchy, SummaryBudgets{}, summarizer);
  REQUIRE(set.story.count(0) == 1);
  REQUIRE(set.theme.count(0) == 1);
  CHECK(set.cluster.empty());
  CHECK(!set.story.at(0).text.empty());
  CHECK(set.story.at(0).source_ids == std::vector<std::string>{"a", "b"});
}

TEST_CASE("summaries persist through json") {
  const Corpus corpus = synthetic::make_corpus(5, 40);
  auto [hierarchy, assignments] = build_hierarchy(corpus, HierarchyConfig{});
  const ExtractiveSummarizer summarizer;
  const SummarySet set =
      summarize_hierarchy(corpus, hierarchy, SummaryBudgets{}, summarizer);
  const SummarySet loaded = summaries_from_json(summaries_to_json(set));
  CHECK(summaries_to_json(loaded) == summaries_to_json(set));
  if (!set.cluster.empty()) {
    const auto& [id, summary] = *set.cluster.begin();
    const ContextSummary* found = loaded.find(SummaryLevel::Cluster, id);
    REQUIRE(found != nullptr);
    CHECK(found->text == summary.text);
  }
}

TEST_CASE("identical inputs give identical summaries") {
  const ExtractiveSummarizer summarizer;
  const std::vector<SourceText> members = {
      {"r1", "Great value for the price. Shipping was slow though."},
      {"r2", "Price is fair. Would buy again."},
  };
  const auto profile_vec = profile({{"price", 2.0}, {"shipping", 1.0}});
  const auto s1 = summarize_cluster(0, members, profile_vec, 30, summarizer);
  const auto s2 = summarize_cluster(0, members, profile_vec, 30, summarizer);
  CHECK(s1.text == s2.text);
}
