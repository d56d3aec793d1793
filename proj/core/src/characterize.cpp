#include "ssas/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ssas/csv.hpp"
#include "ssas/util.hpp"

namespace ssas {

std::string to_string(VolumeBucket bucket) {
  return bucket == VolumeBucket::High ? "HIGH" : "LOW";
}

std::string to_string(DistributionBucket bucket) {
  switch (bucket) {
    case DistributionBucket::Persistent100: return "PERSISTENT_100";
    case DistributionBucket::Intermittent51To99: return "INTERMITTENT_51_99";
    case DistributionBucket::Sparse0To50: return "SPARSE_0_50";
  }
  return "SPARSE_0_50";
}

std::vector<EntityActivity> compute_entity_activity(const Corpus& corpus) {
  if (corpus.entity_index.empty()) {
    throw std::invalid_argument("compute_entity_activity: corpus has no entities");
  }

  // Dataset lifecycle: quarters spanned by the earliest and latest review.
  Date min_date{};
  Date max_date{};
  bool have_date = false;
  for (const auto& review : corpus.reviews) {
    const auto date = parse_timestamp(review.timestamp);
    if (!date) {
      throw std::runtime_error("unparseable timestamp for review " + review.id);
    }
    if (!have_date) {
      min_date = max_date = *date;
      have_date = true;
    } else {
      if (*date < min_date) min_date = *date;
      if (max_date < *date) max_date = *date;
    }
  }
  const int total_quarters = have_date ? quarters_in_range(min_date, max_date) : 0;

  std::vector<EntityActivity> activity;
  activity.reserve(corpus.entity_index.size());
  std::size_t max_count = 0;
  for (const auto& [entity_id, indices] : corpus.entity_index) {
    max_count = std::max(max_count, indices.size());
  }

  for (const auto& [entity_id, indices] : corpus.entity_index) {
    EntityActivity row;
    row.entity_id = entity_id;
    row.review_count = indices.size();
    row.normalized_volume =
        max_count == 0 ? 0.0
                       : 100.0 * static_cast<double>(indices.size()) /
                             static_cast<double>(max_count);
    std::set<std::string> quarters;
    for (std::size_t idx : indices) {
      const auto& quarter = corpus.reviews[idx].quarter;
      if (quarter.empty()) {
        throw std::runtime_error("quarters not assigned (review " +
                                 corpus.reviews[idx].id + ")");
      }
      quarters.insert(quarter);
    }
    row.active_quarters = static_cast<int>(quarters.size());
    row.total_quarters = total_quarters;
    row.distribution_fraction =
        total_quarters == 0 ? 0.0
                            : static_cast<double>(row.active_quarters) /
                                  static_cast<double>(total_quarters);
    if (row.distribution_fraction >= 1.0) {
      row.distribution_bucket = DistributionBucket::Persistent100;
    } else if (row.distribution_fraction > 0.5) {
      row.distribution_bucket = DistributionBucket::Intermittent51To99;
    } else {
      row.distribution_bucket = DistributionBucket::Sparse0To50;
    }
    activity.push_back(std::move(row));
  }

  double mean_volume = 0.0;
  for (const auto& row : activity) mean_volume += row.normalized_volume;
  mean_volume /= static_cast<double>(activity.size());

  // "Exceeding the mean" read strictly: equal-to-mean entities are LOW.
  for (auto& row : activity) {
    row.volume_bucket = row.normalized_volume > mean_volume ? VolumeBucket::High
                                                            : VolumeBucket::Low;
  }
  return activity;
}

VolumeFilter volume_filter_from_name(const std::string& name) {
  const std::string lower = to_lower(name);
  if (lower == "all") return VolumeFilter::All;
  if (lower == "high") return VolumeFilter::High;
  if (lower == "low") return VolumeFilter::Low;
  throw std::invalid_argument("unknown volume filter: " + name);
}

DistributionFilter distribution_filter_from_name(const std::string& name) {
  const std::string lower = to_lower(name);
  if (lower == "all") return DistributionFilter::All;
  if (lower == "100") return DistributionFilter::Persistent100;
  if (lower == "51-99") return DistributionFilter::Intermittent51To99;
  if (lower == "0-50") return DistributionFilter::Sparse0To50;
  throw std::invalid_argument("unknown distribution filter: " + name);
}

std::string to_string(VolumeFilter filter) {
  switch (filter) {
    case VolumeFilter::All: return "all";
    case VolumeFilter::High: return "high";
    case VolumeFilter::Low: return "low";
  }
  return "all";
}

std::string to_string(DistributionFilter filter) {
  switch (filter) {
    case DistributionFilter::All: return "all";
    case DistributionFilter::Persistent100: return "100";
    case DistributionFilter::Intermittent51To99: return "51-99";
    case DistributionFilter::Sparse0To50: return "0-50";
  }
  return "all";
}

std::string ScenarioFilter::label() const {
  if (is_base()) return "base";
  return "volume=" + to_string(volume) + ",distribution=" + to_string(distribution);
}

std::vector<ScenarioFilter> default_scenarios() {
  using V = VolumeFilter;
  using D = DistributionFilter;
  return {
      {V::All, D::All},
      {V::High, D::Persistent100},
      {V::High, D::Intermittent51To99},
      {V::High, D::Sparse0To50},
      {V::Low, D::Persistent100},
      {V::Low, D::Intermittent51To99},
      {V::Low, D::Sparse0To50},
  };
}

namespace {

bool matches(const EntityActivity& row, const ScenarioFilter& filter) {
  if (filter.volume != VolumeFilter::All) {
    const auto want = filter.volume == VolumeFilter::High ? VolumeBucket::High
                                                          : VolumeBucket::Low;
    if (row.volume_bucket != want) return false;
  }
  switch (filter.distribution) {
    case DistributionFilter::All: break;
    case DistributionFilter::Persistent100:
      if (row.distribution_bucket != DistributionBucket::Persistent100) return false;
      break;
    case DistributionFilter::Intermittent51To99:
      if (row.distribution_bucket != DistributionBucket::Intermittent51To99)
        return false;
      break;
    case DistributionFilter::Sparse0To50:
      if (row.distribution_bucket != DistributionBucket::Sparse0To50) return false;
      break;
  }
  return true;
}

}  // namespace

Corpus segment(const Corpus& corpus, const std::vector<EntityActivity>& activity,
               const ScenarioFilter& filter) {
  std::set<std::string> selected;
  std::set<std::string> covered;
  for (const auto& row : activity) {
    covered.insert(row.entity_id);
    if (matches(row, filter)) selected.insert(row.entity_id);
  }
  for (const auto& [entity_id, indices] : corpus.entity_index) {
    if (!covered.count(entity_id)) {
      throw std::invalid_argument("activity does not cover entity " + entity_id);
    }
  }

  Corpus subset;
  subset.dataset_name = corpus.dataset_name;
  for (const auto& review : corpus.reviews) {
    if (selected.count(review.entity_id)) subset.reviews.push_back(review);
  }
  subset.rebuild_index();
  return subset;
}

ConcentrationStats concentration_stats(const std::vector<EntityActivity>& activity,
                                       double share_target) {
  if (activity.empty()) {
    throw std::invalid_argument("concentration_stats: empty activity");
  }
  std::vector<std::size_t> counts;
  counts.reserve(activity.size());
  std::size_t total = 0;
  for (const auto& row : activity) {
    counts.push_back(row.review_count);
    total += row.review_count;
  }
  std::sort(counts.begin(), counts.end(), std::greater<>());

  ConcentrationStats stats;
  stats.share_target = share_target;
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    cumulative += counts[i];
    if (total == 0 ||
        static_cast<double>(cumulative) >= share_target * static_cast<double>(total)) {
      stats.entities_needed = i + 1;
      break;
    }
  }
  if (stats.entities_needed == 0) stats.entities_needed = counts.size();
  stats.entity_fraction = static_cast<double>(stats.entities_needed) /
                          static_cast<double>(counts.size());
  std::size_t held = 0;
  for (std::size_t i = 0; i < stats.entities_needed; ++i) held += counts[i];
  stats.volume_share =
      total == 0 ? 0.0 : static_cast<double>(held) / static_cast<double>(total);
  return stats;
}

double volume_share_of_top(const std::vector<EntityActivity>& activity,
                           double entity_fraction) {
  if (activity.empty()) {
    throw std::invalid_argument("volume_share_of_top: empty activity");
  }
  std::vector<std::size_t> counts;
  counts.reserve(activity.size());
  std::size_t total = 0;
  for (const auto& row : activity) {
    counts.push_back(row.review_count);
    total += row.review_count;
  }
  std::sort(counts.begin(), counts.end(), std::greater<>());
  const auto take = static_cast<std::size_t>(
      std::ceil(entity_fraction * static_cast<double>(counts.size())));
  std::size_t held = 0;
  for (std::size_t i = 0; i < std::min(take, counts.size()); ++i) held += counts[i];
  return total == 0 ? 0.0 : static_cast<double>(held) / static_cast<double>(total);
}

void save_activity_csv(const std::vector<EntityActivity>& activity,
                       const std::string& path) {
  CsvWriter writer({"entity_id", "review_count", "normalized_volume",
                    "volume_bucket", "active_quarters", "total_quarters",
                    "distribution_fraction", "distribution_bucket"});
  for (const auto& row : activity) {
    writer.add_row({row.entity_id, std::to_string(row.review_count),
                    format_double(row.normalized_volume), to_string(row.volume_bucket),
                    std::to_string(row.active_quarters),
                    std::to_string(row.total_quarters),
                    format_double(row.distribution_fraction),
                    to_string(row.distribution_bucket)});
  }
  writer.save(path);
}

std::vector<EntityActivity> load_activity_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::vector<EntityActivity> activity;
  for (const auto& row : table.rows) {
    if (row.size() < 8) throw std::runtime_error("short activity row in " + path);
    EntityActivity item;
    item.entity_id = row[0];
    item.review_count = std::stoull(row[1]);
    item.normalized_volume = std::stod(row[2]);
    item.volume_bucket = row[3] == "HIGH" ? VolumeBucket::High : VolumeBucket::Low;
    item.active_quarters = std::stoi(row[4]);
    item.total_quarters = std::stoi(row[5]);
    item.distribution_fraction = std::stod(row[6]);
    if (row[7] == "PERSISTENT_100") {
      item.distribution_bucket = DistributionBucket::Persistent100;
    } else if (row[7] == "INTERMITTENT_51_99") {
      item.distribution_bucket = DistributionBucket::Intermittent51To99;
    } else {
      item.distribution_bucket = DistributionBucket::Sparse0To50;
    }
    activity.push_back(std::move(item));
  }
  return activity;
}

}  // namespace ssas
