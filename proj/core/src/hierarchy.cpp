#include "ssas/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ssas/csv.hpp"
#include "ssas/util.hpp"

namespace ssas {
namespace {

using nlohmann::json;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

struct LevelGrouping {
  // Groups of corpus indices, sorted by (size desc, min index asc).
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> unclassified;  // sorted ascending
};

/// Link items whose cosine reaches `threshold`; connected components of
/// size >= 2 become groups. Only pairs sharing at least one term can have
/// nonzero cosine, so candidates come from a term inverted index.
LevelGrouping group_level(const std::vector<std::size_t>& items,
                          const std::vector<FeatureVector>& features,
                          double threshold, std::size_t max_fanout) {
  const std::size_t m = items.size();
  UnionFind uf(m);

  if (threshold <= 0.0) {
    for (std::size_t i = 1; i < m; ++i) uf.unite(0, i);
  } else {
    std::unordered_map<std::string, std::vector<std::size_t>> postings;
    for (std::size_t pos = 0; pos < m; ++pos) {
      for (const auto& [term, w] : features[items[pos]].terms()) {
        postings[term].push_back(pos);
      }
    }
    std::unordered_set<std::uint64_t> checked;
    for (const auto& [term, positions] : postings) {
      for (std::size_t a = 0; a < positions.size(); ++a) {
        for (std::size_t b = a + 1; b < positions.size(); ++b) {
          const std::size_t i = positions[a];
          const std::size_t j = positions[b];
          if (uf.find(i) == uf.find(j)) continue;
          const std::uint64_t key =
              static_cast<std::uint64_t>(std::min(i, j)) * m + std::max(i, j);
          if (!checked.insert(key).second) continue;
          if (cosine_similarity(features[items[i]], features[items[j]]) >=
              threshold) {
            uf.unite(i, j);
          }
        }
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t pos = 0; pos < m; ++pos) {
    components[uf.find(pos)].push_back(items[pos]);
  }

  LevelGrouping result;
  for (auto& [root, members] : components) {
    std::sort(members.begin(), members.end());
    if (members.size() >= 2) {
      result.groups.push_back(std::move(members));
    } else {
      result.unclassified.push_back(members.front());
    }
  }
  std::sort(result.groups.begin(), result.groups.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.front() < b.front();
            });
  if (max_fanout > 0 && result.groups.size() > max_fanout) {
    for (std::size_t g = max_fanout; g < result.groups.size(); ++g) {
      for (std::size_t idx : result.groups[g]) result.unclassified.push_back(idx);
    }
    result.groups.resize(max_fanout);
  }
  std::sort(result.unclassified.begin(), result.unclassified.end());
  return result;
}

FeatureVector mean_vector(const std::vector<std::size_t>& members,
                          const std::vector<FeatureVector>& features) {
  FeatureVector sum;
  for (std::size_t idx : members) {
    for (const auto& [term, w] : features[idx].terms()) sum.add(term, w);
  }
  if (!members.empty()) sum.scale(1.0 / static_cast<double>(members.size()));
  return sum;
}

FeatureVector keyword_profile(const std::vector<std::size_t>& members,
                              const std::vector<FeatureVector>& features,
                              std::size_t top_k) {
  FeatureVector total;
  for (std::size_t idx : members) {
    for (const auto& [term, w] : features[idx].terms()) total.add(term, w);
  }
  if (top_k == 0 || total.size() <= top_k) return total;
  std::vector<std::pair<std::string, double>> terms(total.begin(), total.end());
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  terms.resize(top_k);
  FeatureVector profile;
  for (auto& [term, w] : terms) profile.add(term, w);
  return profile;
}

json vector_to_json(const FeatureVector& vec) {
  json obj = json::object();
  for (const auto& [term, w] : vec.terms()) obj[term] = w;
  return obj;
}

FeatureVector vector_from_json(const json& obj) {
  FeatureVector vec;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    vec.add(it.key(), it.value().get<double>());
  }
  return vec;
}

}  // namespace

const ThemeNode* Hierarchy::theme(int id) const {
  for (const auto& t : themes) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const StoryNode* Hierarchy::story(int story_id) const {
  for (const auto& t : themes) {
    for (const auto& s : t.stories) {
      if (s.id == story_id && story_id >= 0) return &s;
    }
  }
  return nullptr;
}

const ClusterNode* Hierarchy::cluster(int cluster_id) const {
  for (const auto& t : themes) {
    for (const auto& s : t.stories) {
      for (const auto& c : s.clusters) {
        if (c.id == cluster_id && cluster_id >= 0) return &c;
      }
    }
  }
  return nullptr;
}

std::size_t Hierarchy::theme_count() const {
  std::size_t n = 0;
  for (const auto& t : themes) n += t.id >= 0;
  return n;
}

std::size_t Hierarchy::story_count() const {
  std::size_t n = 0;
  for (const auto& t : themes)
    for (const auto& s : t.stories) n += s.id >= 0;
  return n;
}

std::size_t Hierarchy::cluster_count() const {
  std::size_t n = 0;
  for (const auto& t : themes)
    for (const auto& s : t.stories)
      for (const auto& c : s.clusters) n += c.id >= 0;
  return n;
}

BuildResult ThresholdHierarchyBuilder::build(const Corpus& corpus,
                                             const HierarchyConfig& config) const {
  if (corpus.reviews.empty()) {
    throw std::invalid_argument("build_hierarchy: empty corpus");
  }

  const std::size_t n = corpus.reviews.size();
  std::vector<FeatureVector> features(n);
  parallel_for(n, [&](std::size_t i) { features[i] = extractor_(corpus.reviews[i].text); });

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});

  struct ClusterDraft {
    std::vector<std::size_t> members;
    int id = -1;
  };
  struct StoryDraft {
    std::vector<std::size_t> members;
    std::vector<ClusterDraft> clusters;
    std::vector<std::size_t> loose;  // cluster-level -1
    int id = -1;
  };
  struct ThemeDraft {
    std::vector<std::size_t> members;
    std::vector<StoryDraft> stories;
    std::vector<std::size_t> loose;  // story-level -1
    int id = -1;
  };

  LevelGrouping theme_groups = group_level(all, features, config.theme_threshold,
                                           config.max_fanout);
  std::vector<ThemeDraft> drafts;
  drafts.reserve(theme_groups.groups.size());
  for (auto& members : theme_groups.groups) {
    ThemeDraft theme;
    theme.members = members;
    LevelGrouping story_groups = group_level(members, features,
                                             config.story_threshold,
                                             config.max_fanout);
    theme.loose = story_groups.unclassified;
    for (auto& story_members : story_groups.groups) {
      StoryDraft story;
      story.members = story_members;
      LevelGrouping cluster_groups = group_level(story_members, features,
                                                 config.cluster_threshold,
                                                 config.max_fanout);
      story.loose = cluster_groups.unclassified;
      for (auto& cluster_members : cluster_groups.groups) {
        story.clusters.push_back(ClusterDraft{cluster_members, -1});
      }
      theme.stories.push_back(std::move(story));
    }
    drafts.push_back(std::move(theme));
  }

  // Ids per level: descending member count, ties by earliest member.
  for (std::size_t t = 0; t < drafts.size(); ++t) drafts[t].id = static_cast<int>(t);

  std::vector<StoryDraft*> story_ptrs;
  for (auto& theme : drafts)
    for (auto& story : theme.stories) story_ptrs.push_back(&story);
  std::sort(story_ptrs.begin(), story_ptrs.end(), [](const auto* a, const auto* b) {
    if (a->members.size() != b->members.size())
      return a->members.size() > b->members.size();
    return a->members.front() < b->members.front();
  });
  for (std::size_t s = 0; s < story_ptrs.size(); ++s)
    story_ptrs[s]->id = static_cast<int>(s);

  std::vector<ClusterDraft*> cluster_ptrs;
  for (auto& theme : drafts)
    for (auto& story : theme.stories)
      for (auto& cluster : story.clusters) cluster_ptrs.push_back(&cluster);
  std::sort(cluster_ptrs.begin(), cluster_ptrs.end(),
            [](const auto* a, const auto* b) {
              if (a->members.size() != b->members.size())
                return a->members.size() > b->members.size();
              return a->members.front() < b->members.front();
            });
  for (std::size_t c = 0; c < cluster_ptrs.size(); ++c)
    cluster_ptrs[c]->id = static_cast<int>(c);

  Hierarchy hierarchy;
  std::vector<HierarchyAssignment> assignments(n);
  auto review_id = [&](std::size_t idx) { return corpus.reviews[idx].id; };

  auto make_cluster = [&](const ClusterDraft& draft) {
    ClusterNode node;
    node.id = draft.id;
    node.centroid = mean_vector(draft.members, features);
    for (std::size_t idx : draft.members) node.member_ids.push_back(review_id(idx));
    return node;
  };

  for (const auto& theme_draft : drafts) {
    ThemeNode theme;
    theme.id = theme_draft.id;
    theme.centroid = mean_vector(theme_draft.members, features);
    theme.keyword_profile =
        keyword_profile(theme_draft.members, features, config.keyword_profile_size);

    // Stories ordered by id; -1 bucket appended last.
    std::vector<const StoryDraft*> ordered;
    for (const auto& story : theme_draft.stories) ordered.push_back(&story);
    std::sort(ordered.begin(), ordered.end(),
              [](const auto* a, const auto* b) { return a->id < b->id; });

    for (const auto* story_draft : ordered) {
      StoryNode story;
      story.id = story_draft->id;
      story.centroid = mean_vector(story_draft->members, features);

      std::vector<const ClusterDraft*> ordered_clusters;
      for (const auto& cluster : story_draft->clusters)
        ordered_clusters.push_back(&cluster);
      std::sort(ordered_clusters.begin(), ordered_clusters.end(),
                [](const auto* a, const auto* b) { return a->id < b->id; });
      for (const auto* cluster_draft : ordered_clusters) {
        story.clusters.push_back(make_cluster(*cluster_draft));
        for (std::size_t idx : cluster_draft->members) {
          assignments[idx] = HierarchyAssignment{review_id(idx), theme.id,
                                                 story.id, cluster_draft->id};
        }
      }
      if (!story_draft->loose.empty()) {
        ClusterDraft loose{story_draft->loose, -1};
        story.clusters.push_back(make_cluster(loose));
        for (std::size_t idx : story_draft->loose) {
          assignments[idx] =
              HierarchyAssignment{review_id(idx), theme.id, story.id, -1};
        }
      }
      theme.stories.push_back(std::move(story));
    }

    if (!theme_draft.loose.empty()) {
      StoryNode bucket;
      bucket.id = -1;
      ClusterDraft loose{theme_draft.loose, -1};
      bucket.clusters.push_back(make_cluster(loose));
      for (std::size_t idx : theme_draft.loose) {
        assignments[idx] = HierarchyAssignment{review_id(idx), theme.id, -1, -1};
      }
      theme.stories.push_back(std::move(bucket));
    }
    hierarchy.themes.push_back(std::move(theme));
  }

  if (!theme_groups.unclassified.empty()) {
    ThemeNode bucket;
    bucket.id = -1;
    StoryNode story;
    story.id = -1;
    ClusterNode node;
    node.id = -1;
    for (std::size_t idx : theme_groups.unclassified) {
      node.member_ids.push_back(review_id(idx));
      assignments[idx] = HierarchyAssignment{review_id(idx), -1, -1, -1};
    }
    story.clusters.push_back(std::move(node));
    bucket.stories.push_back(std::move(story));
    hierarchy.themes.push_back(std::move(bucket));
  }

  return {std::move(hierarchy), std::move(assignments)};
}

BuildResult build_hierarchy(const Corpus& corpus, const HierarchyConfig& config) {
  return ThresholdHierarchyBuilder().build(corpus, config);
}

HierarchyAssignment assign(const std::string& review_id,
                           const FeatureVector& features,
                           const Hierarchy& hierarchy,
                           const HierarchyConfig& config) {
  HierarchyAssignment result{review_id, -1, -1, -1};

  const ThemeNode* best_theme = nullptr;
  double best_sim = -1.0;
  for (const auto& theme : hierarchy.themes) {
    if (theme.id < 0) continue;
    const double sim = cosine_similarity(features, theme.centroid);
    if (sim > best_sim) {
      best_sim = sim;
      best_theme = &theme;
    }
  }
  if (best_theme == nullptr || best_sim < config.theme_threshold) return result;
  result.theme_id = best_theme->id;

  const StoryNode* best_story = nullptr;
  best_sim = -1.0;
  for (const auto& story : best_theme->stories) {
    if (story.id < 0) continue;
    const double sim = cosine_similarity(features, story.centroid);
    if (sim > best_sim) {
      best_sim = sim;
      best_story = &story;
    }
  }
  if (best_story == nullptr || best_sim < config.story_threshold) return result;
  result.story_id = best_story->id;

  const ClusterNode* best_cluster = nullptr;
  best_sim = -1.0;
  for (const auto& cluster : best_story->clusters) {
    if (cluster.id < 0) continue;
    const double sim = cosine_similarity(features, cluster.centroid);
    if (sim > best_sim) {
      best_sim = sim;
      best_cluster = &cluster;
    }
  }
  if (best_cluster == nullptr || best_sim < config.cluster_threshold) return result;
  result.cluster_id = best_cluster->id;
  return result;
}

HierarchyAssignment assign(const Review& review, const Hierarchy& hierarchy,
                           const HierarchyConfig& config) {
  return assign(review.id, extract_features(review.text), hierarchy, config);
}

std::string hierarchy_to_json(const Hierarchy& hierarchy) {
  json doc;
  doc["themes"] = json::array();
  for (const auto& theme : hierarchy.themes) {
    json t;
    t["id"] = theme.id;
    t["centroid"] = vector_to_json(theme.centroid);
    t["keyword_profile"] = vector_to_json(theme.keyword_profile);
    t["stories"] = json::array();
    for (const auto& story : theme.stories) {
      json s;
      s["id"] = story.id;
      s["centroid"] = vector_to_json(story.centroid);
      s["clusters"] = json::array();
      for (const auto& cluster : story.clusters) {
        json c;
        c["id"] = cluster.id;
        c["centroid"] = vector_to_json(cluster.centroid);
        c["member_ids"] = cluster.member_ids;
        s["clusters"].push_back(std::move(c));
      }
      t["stories"].push_back(std::move(s));
    }
    doc["themes"].push_back(std::move(t));
  }
  return doc.dump(2) + "\n";
}

Hierarchy hierarchy_from_json(const std::string& text) {
  const json doc = json::parse(text);
  Hierarchy hierarchy;
  for (const auto& t : doc.at("themes")) {
    ThemeNode theme;
    theme.id = t.at("id").get<int>();
    theme.centroid = vector_from_json(t.at("centroid"));
    theme.keyword_profile = vector_from_json(t.at("keyword_profile"));
    for (const auto& s : t.at("stories")) {
      StoryNode story;
      story.id = s.at("id").get<int>();
      story.centroid = vector_from_json(s.at("centroid"));
      for (const auto& c : s.at("clusters")) {
        ClusterNode cluster;
        cluster.id = c.at("id").get<int>();
        cluster.centroid = vector_from_json(c.at("centroid"));
        cluster.member_ids = c.at("member_ids").get<std::vector<std::string>>();
        story.clusters.push_back(std::move(cluster));
      }
      theme.stories.push_back(std::move(story));
    }
    hierarchy.themes.push_back(std::move(theme));
  }
  return hierarchy;
}

void save_hierarchy(const Hierarchy& hierarchy, const std::string& path) {
  write_file(path, hierarchy_to_json(hierarchy));
}

Hierarchy load_hierarchy(const std::string& path) {
  return hierarchy_from_json(read_file(path));
}

void save_assignments_csv(const std::vector<HierarchyAssignment>& assignments,
                          const std::string& path) {
  CsvWriter writer({"review_id", "theme_id", "story_id", "cluster_id"});
  for (const auto& a : assignments) {
    writer.add_row({a.review_id, std::to_string(a.theme_id),
                    std::to_string(a.story_id), std::to_string(a.cluster_id)});
  }
  writer.save(path);
}

std::vector<HierarchyAssignment> load_assignments_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::vector<HierarchyAssignment> assignments;
  assignments.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (row.size() < 4) throw std::runtime_error("short assignment row in " + path);
    assignments.push_back(HierarchyAssignment{row[0], std::stoi(row[1]),
                                              std::stoi(row[2]), std::stoi(row[3])});
  }
  return assignments;
}

}  // namespace ssas
