#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssas/corpus.hpp"
#include "ssas/features.hpp"
#include "ssas/hierarchy.hpp"

namespace ssas {

enum class SummaryLevel { Cluster, Story, Theme };
std::string to_string(SummaryLevel level);

struct ContextSummary {
  SummaryLevel level = SummaryLevel::Cluster;
  int node_id = -1;
  std::string text;
  std::vector<std::string> source_ids;  // review ids for clusters, child node ids above
  int token_budget = 0;
};

struct SourceText {
  std::string source_id;
  std::string text;
};

/// Text reducer behind the aggregation path. `cover_all_sources` asks for
/// at least one sentence per source when the budget allows (used when the
/// sources are child summaries).
class Summarizer {
 public:
  virtual ~Summarizer() = default;
  virtual std::string summarize(const std::vector<SourceText>& sources,
                                const FeatureVector& keyword_profile,
                                int token_budget,
                                bool cover_all_sources) const = 0;
};

/// Deterministic default: sentences scored by summed keyword weights,
/// selected greedily in (score desc, position asc) order while they fit the
/// whitespace-token budget; exact duplicate sentences are selected once.
class ExtractiveSummarizer : public Summarizer {
 public:
  std::string summarize(const std::vector<SourceText>& sources,
                        const FeatureVector& keyword_profile, int token_budget,
                        bool cover_all_sources) const override;
};

struct SummaryBudgets {
  int cluster = 120;
  int story = 200;
  int theme = 300;
};

ContextSummary summarize_cluster(int cluster_id,
                                 const std::vector<SourceText>& members,
                                 const FeatureVector& keyword_profile, int budget,
                                 const Summarizer& summarizer);

/// Children must all be CLUSTER summaries; source_ids become the child ids.
ContextSummary summarize_story(int story_id,
                               const std::vector<ContextSummary>& children,
                               const FeatureVector& keyword_profile, int budget,
                               const Summarizer& summarizer);

/// Children must all be STORY summaries.
ContextSummary summarize_theme(int theme_id,
                               const std::vector<ContextSummary>& children,
                               const FeatureVector& keyword_profile, int budget,
                               const Summarizer& summarizer);

/// Summaries for every real node, keyed by node id per level.
struct SummarySet {
  std::map<int, ContextSummary> cluster;
  std::map<int, ContextSummary> story;
  std::map<int, ContextSummary> theme;

  const ContextSummary* find(SummaryLevel level, int node_id) const;
};

/// Full bottom-up pass: clusters from member reviews, stories from cluster
/// summaries, themes from story summaries. The -1 buckets get no summaries.
/// A real node whose children all fell into the -1 bucket (so the strict
/// path has no input) is summarized directly from its member reviews.
SummarySet summarize_hierarchy(const Corpus& corpus, const Hierarchy& hierarchy,
                               const SummaryBudgets& budgets,
                               const Summarizer& summarizer);

std::string summaries_to_json(const SummarySet& summaries);
SummarySet summaries_from_json(const std::string& text);
void save_summaries(const SummarySet& summaries, const std::string& path);
SummarySet load_summaries(const std::string& path);

}  // namespace ssas
