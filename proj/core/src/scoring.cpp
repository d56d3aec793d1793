#include "ssas/scoring.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ssas/csv.hpp"
#include "ssas/util.hpp"

namespace ssas {

double component_score(const FeatureVector& review_features,
                       const FeatureVector& node_centroid) {
  return cosine_similarity(review_features, node_centroid);
}

SnrScore compute_snr(const std::string& review_id, const FeatureVector& features,
                     const HierarchyAssignment& assignment,
                     const Hierarchy& hierarchy) {
  SnrScore score;
  score.review_id = review_id;
  if (assignment.theme_id >= 0) {
    const ThemeNode* theme = hierarchy.theme(assignment.theme_id);
    if (!theme) {
      throw std::invalid_argument("compute_snr: dangling theme id " +
                                  std::to_string(assignment.theme_id));
    }
    score.s_theme = component_score(features, theme->centroid);
  }
  if (assignment.story_id >= 0) {
    const StoryNode* story = hierarchy.story(assignment.story_id);
    if (!story) {
      throw std::invalid_argument("compute_snr: dangling story id " +
                                  std::to_string(assignment.story_id));
    }
    score.s_story = component_score(features, story->centroid);
  }
  if (assignment.cluster_id >= 0) {
    const ClusterNode* cluster = hierarchy.cluster(assignment.cluster_id);
    if (!cluster) {
      throw std::invalid_argument("compute_snr: dangling cluster id " +
                                  std::to_string(assignment.cluster_id));
    }
    score.s_cluster = component_score(features, cluster->centroid);
  }
  score.total = score.s_cluster + score.s_story + score.s_theme;
  return score;
}

SnrScore compute_snr(const Review& review, const HierarchyAssignment& assignment,
                     const Hierarchy& hierarchy) {
  return compute_snr(review.id, extract_features(review.text), assignment, hierarchy);
}

std::vector<SnrScore> compute_all_snr(const Corpus& corpus,
                                      const std::vector<HierarchyAssignment>& assignments,
                                      const Hierarchy& hierarchy) {
  std::unordered_map<std::string, const HierarchyAssignment*> by_id;
  for (const auto& a : assignments) by_id[a.review_id] = &a;

  // Node lookups are linear in the hierarchy; cache them once here.
  std::map<int, const ThemeNode*> themes;
  std::map<int, const StoryNode*> stories;
  std::map<int, const ClusterNode*> clusters;
  for (const auto& t : hierarchy.themes) {
    if (t.id >= 0) themes[t.id] = &t;
    for (const auto& s : t.stories) {
      if (s.id >= 0) stories[s.id] = &s;
      for (const auto& c : s.clusters) {
        if (c.id >= 0) clusters[c.id] = &c;
      }
    }
  }

  std::vector<SnrScore> scores(corpus.reviews.size());
  parallel_for(corpus.reviews.size(), [&](std::size_t i) {
    const Review& review = corpus.reviews[i];
    auto it = by_id.find(review.id);
    if (it == by_id.end()) {
      throw std::invalid_argument("compute_all_snr: no assignment for review " +
                                  review.id);
    }
    const HierarchyAssignment& a = *it->second;
    const FeatureVector features = extract_features(review.text);
    SnrScore score;
    score.review_id = review.id;
    if (a.theme_id >= 0) {
      auto node = themes.find(a.theme_id);
      if (node == themes.end())
        throw std::invalid_argument("compute_all_snr: dangling theme id");
      score.s_theme = component_score(features, node->second->centroid);
    }
    if (a.story_id >= 0) {
      auto node = stories.find(a.story_id);
      if (node == stories.end())
        throw std::invalid_argument("compute_all_snr: dangling story id");
      score.s_story = component_score(features, node->second->centroid);
    }
    if (a.cluster_id >= 0) {
      auto node = clusters.find(a.cluster_id);
      if (node == clusters.end())
        throw std::invalid_argument("compute_all_snr: dangling cluster id");
      score.s_cluster = component_score(features, node->second->centroid);
    }
    score.total = score.s_cluster + score.s_story + score.s_theme;
    scores[i] = std::move(score);
  });
  return scores;
}

std::vector<ClusterGateStats> gate_clusters(
    const std::vector<HierarchyAssignment>& assignments,
    const std::vector<SnrScore>& scores, double threshold) {
  std::unordered_map<std::string, double> totals;
  for (const auto& s : scores) totals[s.review_id] = s.total;

  std::map<ClusterKey, ClusterGateStats> by_key;
  for (const auto& a : assignments) {
    if (a.is_irrelevant()) continue;
    const ClusterKey key{a.theme_id, a.story_id, a.cluster_id};
    auto& stats = by_key[key];
    stats.key = key;
    stats.volume += 1;
    auto it = totals.find(a.review_id);
    if (it == totals.end()) {
      throw std::invalid_argument("gate_clusters: no SNR score for review " +
                                  a.review_id);
    }
    stats.cumulative_snr += it->second;
  }
  if (by_key.empty()) {
    throw std::invalid_argument("gate_clusters: no fully classified reviews");
  }

  std::size_t max_volume = 0;
  double max_snr = 0.0;
  for (const auto& [key, stats] : by_key) {
    max_volume = std::max(max_volume, stats.volume);
    max_snr = std::max(max_snr, stats.cumulative_snr);
  }

  std::vector<ClusterGateStats> result;
  result.reserve(by_key.size());
  for (auto& [key, stats] : by_key) {
    stats.normalized_volume =
        max_volume == 0 ? 0.0
                        : 100.0 * static_cast<double>(stats.volume) /
                              static_cast<double>(max_volume);
    stats.normalized_snr =
        max_snr == 0.0 ? 0.0 : 100.0 * stats.cumulative_snr / max_snr;
    stats.retained = stats.normalized_volume >= threshold ||
                     stats.normalized_snr >= threshold;
    result.push_back(stats);
  }
  return result;
}

std::set<std::string> flag_outliers(
    const std::vector<HierarchyAssignment>& assignments,
    const std::vector<ClusterGateStats>& gate_stats) {
  std::set<ClusterKey> pruned;
  for (const auto& stats : gate_stats) {
    if (!stats.retained) pruned.insert(stats.key);
  }
  std::set<std::string> outliers;
  for (const auto& a : assignments) {
    if (a.is_irrelevant()) continue;
    if (pruned.count(ClusterKey{a.theme_id, a.story_id, a.cluster_id})) {
      outliers.insert(a.review_id);
    }
  }
  return outliers;
}

std::string to_string(RefinementStage stage) {
  switch (stage) {
    case RefinementStage::All: return "all";
    case RefinementStage::WithoutIrrelevant: return "without_irrelevant";
    case RefinementStage::WithoutIrrelevantOutlier:
      return "without_irrelevant_outlier";
  }
  return "all";
}

std::set<std::string> stage_filter(const Corpus& corpus,
                                   const std::vector<HierarchyAssignment>& assignments,
                                   const std::set<std::string>& outliers,
                                   RefinementStage stage) {
  std::unordered_map<std::string, const HierarchyAssignment*> by_id;
  for (const auto& a : assignments) by_id[a.review_id] = &a;

  std::set<std::string> kept;
  for (const auto& review : corpus.reviews) {
    if (stage != RefinementStage::All) {
      auto it = by_id.find(review.id);
      if (it == by_id.end()) {
        throw std::invalid_argument("stage_filter: no assignment for review " +
                                    review.id);
      }
      if (it->second->is_irrelevant()) continue;
      if (stage == RefinementStage::WithoutIrrelevantOutlier &&
          outliers.count(review.id)) {
        continue;
      }
    }
    kept.insert(review.id);
  }
  return kept;
}

std::vector<std::string> rank_order(const std::vector<SnrScore>& scores,
                                    const std::set<std::string>& without_irrelevant,
                                    const std::set<std::string>& without_irrelevant_outlier) {
  // 0 = signal, 1 = outlier, 2 = irrelevant
  auto tier = [&](const std::string& id) {
    if (without_irrelevant_outlier.count(id)) return 0;
    if (without_irrelevant.count(id)) return 1;
    return 2;
  };
  std::vector<const SnrScore*> order;
  order.reserve(scores.size());
  for (const auto& s : scores) order.push_back(&s);
  std::sort(order.begin(), order.end(), [&](const SnrScore* a, const SnrScore* b) {
    const int ta = tier(a->review_id);
    const int tb = tier(b->review_id);
    if (ta != tb) return ta < tb;
    if (a->total != b->total) return a->total > b->total;
    return a->review_id < b->review_id;
  });
  std::vector<std::string> ids;
  ids.reserve(order.size());
  for (const auto* s : order) ids.push_back(s->review_id);
  return ids;
}

void save_scores_csv(const std::vector<SnrScore>& scores, const std::string& path) {
  CsvWriter writer({"review_id", "s_cluster", "s_story", "s_theme", "total"});
  for (const auto& s : scores) {
    writer.add_row({s.review_id, format_double(s.s_cluster), format_double(s.s_story),
                    format_double(s.s_theme), format_double(s.total)});
  }
  writer.save(path);
}

std::vector<SnrScore> load_scores_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::vector<SnrScore> scores;
  scores.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() < 5) throw std::runtime_error("short score row in " + path);
    SnrScore s;
    s.review_id = row[0];
    s.s_cluster = std::stod(row[1]);
    s.s_story = std::stod(row[2]);
    s.s_theme = std::stod(row[3]);
    s.total = std::stod(row[4]);
    scores.push_back(std::move(s));
  }
  return scores;
}

void save_gate_csv(const std::vector<ClusterGateStats>& stats, const std::string& path) {
  CsvWriter writer({"theme_id", "story_id", "cluster_id", "volume",
                    "normalized_volume", "cumulative_snr", "normalized_snr",
                    "retained"});
  for (const auto& s : stats) {
    writer.add_row({std::to_string(s.key.theme_id), std::to_string(s.key.story_id),
                    std::to_string(s.key.cluster_id), std::to_string(s.volume),
                    format_double(s.normalized_volume), format_double(s.cumulative_snr),
                    format_double(s.normalized_snr), s.retained ? "1" : "0"});
  }
  writer.save(path);
}

std::vector<ClusterGateStats> load_gate_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::vector<ClusterGateStats> stats;
  stats.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() < 8) throw std::runtime_error("short gate row in " + path);
    ClusterGateStats s;
    s.key = ClusterKey{std::stoi(row[0]), std::stoi(row[1]), std::stoi(row[2])};
    s.volume = std::stoull(row[3]);
    s.normalized_volume = std::stod(row[4]);
    s.cumulative_snr = std::stod(row[5]);
    s.normalized_snr = std::stod(row[6]);
    s.retained = row[7] == "1";
    stats.push_back(std::move(s));
  }
  return stats;
}

void save_outliers(const std::set<std::string>& outliers, const std::string& path) {
  std::ostringstream out;
  out << "review_id\n";
  for (const auto& id : outliers) out << csv_escape(id) << '\n';
  write_file(path, out.str());
}

std::set<std::string> load_outliers(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::set<std::string> outliers;
  for (const auto& row : table.rows) {
    if (!row.empty()) outliers.insert(row[0]);
  }
  return outliers;
}

}  // namespace ssas
