#pragma once

#include <set>
#include <string>
#include <vector>

#include "ssas/corpus.hpp"
#include "ssas/features.hpp"
#include "ssas/hierarchy.hpp"

namespace ssas {

struct SnrScore {
  std::string review_id;
  double s_cluster = 0.0;
  double s_story = 0.0;
  double s_theme = 0.0;
  double total = 0.0;  // s_cluster + s_story + s_theme
};

/// Cosine of the review against a node centroid; 0 when either is empty.
double component_score(const FeatureVector& review_features,
                       const FeatureVector& node_centroid);

/// Per-review signal score: the sum of cluster, story and theme alignment
/// components. Levels assigned -1 contribute 0. Throws on node ids missing
/// from the hierarchy.
SnrScore compute_snr(const Review& review, const HierarchyAssignment& assignment,
                     const Hierarchy& hierarchy);
SnrScore compute_snr(const std::string& review_id, const FeatureVector& features,
                     const HierarchyAssignment& assignment,
                     const Hierarchy& hierarchy);
std::vector<SnrScore> compute_all_snr(const Corpus& corpus,
                                      const std::vector<HierarchyAssignment>& assignments,
                                      const Hierarchy& hierarchy);

struct ClusterKey {
  int theme_id = -1;
  int story_id = -1;
  int cluster_id = -1;
  auto operator<=>(const ClusterKey&) const = default;
};

struct ClusterGateStats {
  ClusterKey key;
  std::size_t volume = 0;
  double normalized_volume = 0.0;  // [0, 100], 100 at the dataset max
  double cumulative_snr = 0.0;
  double normalized_snr = 0.0;     // [0, 100]
  bool retained = false;           // normalized_volume >= t || normalized_snr >= t
};

/// Per-cluster volume and cumulative SNR over fully classified reviews,
/// max-normalized to [0, 100]; a cluster survives when either normalized
/// value reaches the threshold. Throws when no review is fully classified.
std::vector<ClusterGateStats> gate_clusters(
    const std::vector<HierarchyAssignment>& assignments,
    const std::vector<SnrScore>& scores, double threshold = 0.1);

/// Members of pruned clusters. Reviews irrelevant at any level are never
/// outliers; they were removed a stage earlier.
std::set<std::string> flag_outliers(
    const std::vector<HierarchyAssignment>& assignments,
    const std::vector<ClusterGateStats>& gate_stats);

enum class RefinementStage { All, WithoutIrrelevant, WithoutIrrelevantOutlier };
std::string to_string(RefinementStage stage);

/// Review ids surviving the stage: ALL keeps everything, WITHOUT_IRRELEVANT
/// drops any-level -1 assignments, WITHOUT_IRRELEVANT_OUTLIER additionally
/// drops flagged outliers.
std::set<std::string> stage_filter(const Corpus& corpus,
                                   const std::vector<HierarchyAssignment>& assignments,
                                   const std::set<std::string>& outliers,
                                   RefinementStage stage);

/// Descending by SNR total with signal items first, then outliers, then
/// irrelevant items; ties broken by review id.
std::vector<std::string> rank_order(const std::vector<SnrScore>& scores,
                                    const std::set<std::string>& without_irrelevant,
                                    const std::set<std::string>& without_irrelevant_outlier);

void save_scores_csv(const std::vector<SnrScore>& scores, const std::string& path);
std::vector<SnrScore> load_scores_csv(const std::string& path);
void save_gate_csv(const std::vector<ClusterGateStats>& stats, const std::string& path);
std::vector<ClusterGateStats> load_gate_csv(const std::string& path);
void save_outliers(const std::set<std::string>& outliers, const std::string& path);
std::set<std::string> load_outliers(const std::string& path);

}  // namespace ssas
