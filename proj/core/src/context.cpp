#include "ssas/context.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ssas/util.hpp"

namespace ssas {
namespace {

using nlohmann::json;

struct Candidate {
  std::size_t source_idx = 0;
  std::size_t position = 0;  // global sentence position
  std::string text;
  std::size_t tokens = 0;
  double score = 0.0;
};

std::string truncate_tokens(const std::string& text, int budget) {
  std::istringstream in(text);
  std::string token, out;
  int taken = 0;
  while (taken < budget && in >> token) {
    if (taken) out.push_back(' ');
    out += token;
    ++taken;
  }
  return out;
}

}  // namespace

std::string to_string(SummaryLevel level) {
  switch (level) {
    case SummaryLevel::Cluster: return "cluster";
    case SummaryLevel::Story: return "story";
    case SummaryLevel::Theme: return "theme";
  }
  return "cluster";
}

std::string ExtractiveSummarizer::summarize(const std::vector<SourceText>& sources,
                                            const FeatureVector& keyword_profile,
                                            int token_budget,
                                            bool cover_all_sources) const {
  if (sources.empty()) {
    throw std::invalid_argument("summarize: no source texts");
  }
  if (token_budget <= 0) {
    throw std::invalid_argument("summarize: token budget must be positive");
  }

  std::vector<Candidate> candidates;
  std::size_t position = 0;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (auto& sentence : split_sentences(sources[s].text)) {
      Candidate c;
      c.source_idx = s;
      c.position = position++;
      c.tokens = count_tokens(sentence);
      double score = 0.0;
      for (const auto& token : tokenize(sentence)) {
        score += keyword_profile.weight(token);
      }
      c.score = score;
      c.text = std::move(sentence);
      candidates.push_back(std::move(c));
    }
  }
  if (candidates.empty()) return "";

  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (candidates[a].score != candidates[b].score)
      return candidates[a].score > candidates[b].score;
    return candidates[a].position < candidates[b].position;
  });

  std::vector<bool> selected(candidates.size(), false);
  std::set<std::string> seen_text;
  std::size_t remaining = static_cast<std::size_t>(token_budget);

  auto try_take = [&](std::size_t idx) {
    const Candidate& c = candidates[idx];
    if (selected[idx] || c.tokens == 0 || c.tokens > remaining) return false;
    if (!seen_text.insert(c.text).second) return true;  // duplicate, counts as taken
    selected[idx] = true;
    remaining -= c.tokens;
    return true;
  };

  if (cover_all_sources) {
    // One best sentence per source first, in source order.
    for (std::size_t s = 0; s < sources.size(); ++s) {
      for (std::size_t idx : order) {
        if (candidates[idx].source_idx != s) continue;
        if (try_take(idx)) break;
      }
    }
  }
  for (std::size_t idx : order) try_take(idx);

  std::string out;
  bool any = false;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!selected[i]) continue;
    if (any) out.push_back(' ');
    out += candidates[i].text;
    any = true;
  }
  if (!any) {
    // Nothing fit whole; hard-truncate the top-ranked sentence.
    out = truncate_tokens(candidates[order.front()].text, token_budget);
  }
  return out;
}

namespace {

ContextSummary make_summary(SummaryLevel level, int node_id,
                            const std::vector<SourceText>& sources,
                            std::vector<std::string> source_ids,
                            const FeatureVector& keyword_profile, int budget,
                            const Summarizer& summarizer, bool cover_sources) {
  ContextSummary summary;
  summary.level = level;
  summary.node_id = node_id;
  summary.token_budget = budget;
  summary.source_ids = std::move(source_ids);
  summary.text = summarizer.summarize(sources, keyword_profile, budget, cover_sources);
  if (count_tokens(summary.text) > static_cast<std::size_t>(budget)) {
    summary.text = truncate_tokens(summary.text, budget);
  }
  return summary;
}

std::vector<SourceText> child_sources(const std::vector<ContextSummary>& children,
                                      SummaryLevel expected, const char* op) {
  if (children.empty()) {
    throw std::invalid_argument(std::string(op) + ": no child summaries");
  }
  std::vector<SourceText> sources;
  sources.reserve(children.size());
  for (const auto& child : children) {
    if (child.level != expected) {
      throw std::invalid_argument(std::string(op) + ": child summary has level " +
                                  to_string(child.level) + ", expected " +
                                  to_string(expected));
    }
    sources.push_back(SourceText{std::to_string(child.node_id), child.text});
  }
  return sources;
}

}  // namespace

ContextSummary summarize_cluster(int cluster_id,
                                 const std::vector<SourceText>& members,
                                 const FeatureVector& keyword_profile, int budget,
                                 const Summarizer& summarizer) {
  if (members.empty()) {
    throw std::invalid_argument("summarize_cluster: empty member list");
  }
  std::vector<std::string> source_ids;
  source_ids.reserve(members.size());
  for (const auto& m : members) source_ids.push_back(m.source_id);
  return make_summary(SummaryLevel::Cluster, cluster_id, members,
                      std::move(source_ids), keyword_profile, budget, summarizer,
                      /*cover_sources=*/false);
}

ContextSummary summarize_story(int story_id,
                               const std::vector<ContextSummary>& children,
                               const FeatureVector& keyword_profile, int budget,
                               const Summarizer& summarizer) {
  auto sources = child_sources(children, SummaryLevel::Cluster, "summarize_story");
  std::vector<std::string> source_ids;
  for (const auto& child : children) source_ids.push_back(std::to_string(child.node_id));
  return make_summary(SummaryLevel::Story, story_id, sources, std::move(source_ids),
                      keyword_profile, budget, summarizer, /*cover_sources=*/true);
}

ContextSummary summarize_theme(int theme_id,
                               const std::vector<ContextSummary>& children,
                               const FeatureVector& keyword_profile, int budget,
                               const Summarizer& summarizer) {
  auto sources = child_sources(children, SummaryLevel::Story, "summarize_theme");
  std::vector<std::string> source_ids;
  for (const auto& child : children) source_ids.push_back(std::to_string(child.node_id));
  return make_summary(SummaryLevel::Theme, theme_id, sources, std::move(source_ids),
                      keyword_profile, budget, summarizer, /*cover_sources=*/true);
}

const ContextSummary* SummarySet::find(SummaryLevel level, int node_id) const {
  const std::map<int, ContextSummary>* table = nullptr;
  switch (level) {
    case SummaryLevel::Cluster: table = &cluster; break;
    case SummaryLevel::Story: table = &story; break;
    case SummaryLevel::Theme: table = &theme; break;
  }
  auto it = table->find(node_id);
  return it == table->end() ? nullptr : &it->second;
}

SummarySet summarize_hierarchy(const Corpus& corpus, const Hierarchy& hierarchy,
                               const SummaryBudgets& budgets,
                               const Summarizer& summarizer) {
  std::map<std::string, const Review*> by_id;
  for (const auto& review : corpus.reviews) by_id[review.id] = &review;

  auto member_sources = [&](const std::vector<std::string>& ids) {
    std::vector<SourceText> members;
    members.reserve(ids.size());
    for (const auto& id : ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw std::runtime_error("hierarchy member " + id + " not in corpus");
      }
      members.push_back(SourceText{id, it->second->text});
    }
    return members;
  };

  // Direct member-level summary for real nodes whose strict aggregation
  // path has nothing to feed on (every child sits in the -1 bucket).
  auto fallback = [&](SummaryLevel level, int node_id,
                      const std::vector<std::string>& ids,
                      const FeatureVector& profile, int budget) {
    ContextSummary summary;
    summary.level = level;
    summary.node_id = node_id;
    summary.token_budget = budget;
    summary.source_ids = ids;
    const auto sources = member_sources(ids);
    summary.text = summarizer.summarize(sources, profile, budget, false);
    if (count_tokens(summary.text) > static_cast<std::size_t>(budget)) {
      summary.text = truncate_tokens(summary.text, budget);
    }
    return summary;
  };

  auto story_member_ids = [](const StoryNode& story) {
    std::vector<std::string> ids;
    for (const auto& cluster : story.clusters) {
      ids.insert(ids.end(), cluster.member_ids.begin(), cluster.member_ids.end());
    }
    return ids;
  };

  SummarySet set;
  // Strict barrier pipeline: all clusters, then stories, then themes.
  for (const auto& theme : hierarchy.themes) {
    if (theme.id < 0) continue;
    for (const auto& story : theme.stories) {
      if (story.id < 0) continue;
      for (const auto& cluster : story.clusters) {
        if (cluster.id < 0) continue;
        set.cluster[cluster.id] =
            summarize_cluster(cluster.id, member_sources(cluster.member_ids),
                              cluster.centroid, budgets.cluster, summarizer);
      }
    }
  }
  for (const auto& theme : hierarchy.themes) {
    if (theme.id < 0) continue;
    for (const auto& story : theme.stories) {
      if (story.id < 0) continue;
      std::vector<ContextSummary> children;
      for (const auto& cluster : story.clusters) {
        if (cluster.id < 0) continue;
        children.push_back(set.cluster.at(cluster.id));
      }
      if (children.empty()) {
        set.story[story.id] = fallback(SummaryLevel::Story, story.id,
                                       story_member_ids(story), story.centroid,
                                       budgets.story);
      } else {
        set.story[story.id] = summarize_story(story.id, children, story.centroid,
                                              budgets.story, summarizer);
      }
    }
  }
  for (const auto& theme : hierarchy.themes) {
    if (theme.id < 0) continue;
    std::vector<ContextSummary> children;
    for (const auto& story : theme.stories) {
      if (story.id < 0) continue;
      children.push_back(set.story.at(story.id));
    }
    if (children.empty()) {
      std::vector<std::string> ids;
      for (const auto& story : theme.stories) {
        const auto member_ids = story_member_ids(story);
        ids.insert(ids.end(), member_ids.begin(), member_ids.end());
      }
      set.theme[theme.id] = fallback(SummaryLevel::Theme, theme.id, ids,
                                     theme.keyword_profile, budgets.theme);
    } else {
      set.theme[theme.id] = summarize_theme(theme.id, children,
                                            theme.keyword_profile, budgets.theme,
                                            summarizer);
    }
  }
  return set;
}

namespace {

json summary_to_json(const ContextSummary& summary) {
  json obj;
  obj["level"] = to_string(summary.level);
  obj["node_id"] = summary.node_id;
  obj["text"] = summary.text;
  obj["source_ids"] = summary.source_ids;
  obj["token_budget"] = summary.token_budget;
  return obj;
}

ContextSummary summary_from_json(const json& obj) {
  ContextSummary summary;
  const std::string level = obj.at("level").get<std::string>();
  if (level == "cluster") summary.level = SummaryLevel::Cluster;
  else if (level == "story") summary.level = SummaryLevel::Story;
  else if (level == "theme") summary.level = SummaryLevel::Theme;
  else throw std::runtime_error("unknown summary level: " + level);
  summary.node_id = obj.at("node_id").get<int>();
  summary.text = obj.at("text").get<std::string>();
  summary.source_ids = obj.at("source_ids").get<std::vector<std::string>>();
  summary.token_budget = obj.at("token_budget").get<int>();
  return summary;
}

}  // namespace

std::string summaries_to_json(const SummarySet& summaries) {
  json doc;
  auto emit = [](const std::map<int, ContextSummary>& table) {
    json arr = json::array();
    for (const auto& [id, summary] : table) arr.push_back(summary_to_json(summary));
    return arr;
  };
  doc["cluster"] = emit(summaries.cluster);
  doc["story"] = emit(summaries.story);
  doc["theme"] = emit(summaries.theme);
  return doc.dump(2) + "\n";
}

SummarySet summaries_from_json(const std::string& text) {
  const json doc = json::parse(text);
  SummarySet set;
  for (const auto& item : doc.value("cluster", json::array())) {
    auto summary = summary_from_json(item);
    set.cluster[summary.node_id] = std::move(summary);
  }
  for (const auto& item : doc.value("story", json::array())) {
    auto summary = summary_from_json(item);
    set.story[summary.node_id] = std::move(summary);
  }
  for (const auto& item : doc.value("theme", json::array())) {
    auto summary = summary_from_json(item);
    set.theme[summary.node_id] = std::move(summary);
  }
  return set;
}

void save_summaries(const SummarySet& summaries, const std::string& path) {
  write_file(path, summaries_to_json(summaries));
}

SummarySet load_summaries(const std::string& path) {
  return summaries_from_json(read_file(path));
}

}  // namespace ssas
