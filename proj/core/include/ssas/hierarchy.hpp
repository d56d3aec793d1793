#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ssas/corpus.hpp"
#include "ssas/features.hpp"

namespace ssas {

struct HierarchyConfig {
  std::uint64_t seed = 0;
  double theme_threshold = 0.10;
  double story_threshold = 0.25;
  double cluster_threshold = 0.45;
  std::size_t max_fanout = 0;          // per level; 0 = unlimited
  std::size_t keyword_profile_size = 32;
};

struct ClusterNode {
  int id = -1;
  FeatureVector centroid;
  std::vector<std::string> member_ids;
};

struct StoryNode {
  int id = -1;
  FeatureVector centroid;
  std::vector<ClusterNode> clusters;
};

struct ThemeNode {
  int id = -1;
  FeatureVector centroid;
  FeatureVector keyword_profile;
  std::vector<StoryNode> stories;
};

/// Top-down taxonomy. Ids are unique per level across the whole hierarchy
/// and assigned in descending member-count order; id -1 marks the
/// unclassifiable bucket and appears at most once per parent.
struct Hierarchy {
  std::vector<ThemeNode> themes;

  const ThemeNode* theme(int id) const;
  const StoryNode* story(int story_id) const;
  const ClusterNode* cluster(int cluster_id) const;
  std::size_t theme_count() const;    // real themes only (id >= 0)
  std::size_t story_count() const;
  std::size_t cluster_count() const;
};

struct HierarchyAssignment {
  std::string review_id;
  int theme_id = -1;
  int story_id = -1;
  int cluster_id = -1;

  bool is_irrelevant() const {
    return theme_id < 0 || story_id < 0 || cluster_id < 0;
  }
  bool operator==(const HierarchyAssignment&) const = default;
};

using BuildResult = std::pair<Hierarchy, std::vector<HierarchyAssignment>>;

class HierarchyBuilder {
 public:
  virtual ~HierarchyBuilder() = default;
  virtual BuildResult build(const Corpus& corpus,
                            const HierarchyConfig& config) const = 0;
};

/// Reference builder: three-stage similarity grouping. At each level, items
/// whose pairwise cosine reaches the level threshold are linked and the
/// connected components become nodes; singletons fall to the -1 bucket.
/// Fully deterministic for a fixed (corpus, config).
class ThresholdHierarchyBuilder : public HierarchyBuilder {
 public:
  ThresholdHierarchyBuilder() = default;
  explicit ThresholdHierarchyBuilder(FeatureExtractor extractor)
      : extractor_(std::move(extractor)) {}

  BuildResult build(const Corpus& corpus,
                    const HierarchyConfig& config) const override;

 private:
  FeatureExtractor extractor_ = [](std::string_view text) {
    return extract_features(text);
  };
};

/// Convenience entry point using the reference builder.
BuildResult build_hierarchy(const Corpus& corpus, const HierarchyConfig& config);

/// Place one review against a frozen hierarchy: argmax-similarity node per
/// level subject to the level threshold, ties broken by lowest node id.
HierarchyAssignment assign(const Review& review, const Hierarchy& hierarchy,
                           const HierarchyConfig& config);
HierarchyAssignment assign(const std::string& review_id,
                           const FeatureVector& features,
                           const Hierarchy& hierarchy,
                           const HierarchyConfig& config);

std::string hierarchy_to_json(const Hierarchy& hierarchy);
Hierarchy hierarchy_from_json(const std::string& text);
void save_hierarchy(const Hierarchy& hierarchy, const std::string& path);
Hierarchy load_hierarchy(const std::string& path);

void save_assignments_csv(const std::vector<HierarchyAssignment>& assignments,
                          const std::string& path);
std::vector<HierarchyAssignment> load_assignments_csv(const std::string& path);

}  // namespace ssas
