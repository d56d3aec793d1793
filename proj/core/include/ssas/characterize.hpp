#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ssas/corpus.hpp"

namespace ssas {

enum class VolumeBucket { High, Low };
enum class DistributionBucket { Persistent100, Intermittent51To99, Sparse0To50 };

std::string to_string(VolumeBucket bucket);
std::string to_string(DistributionBucket bucket);

struct EntityActivity {
  std::string entity_id;
  std::size_t review_count = 0;
  double normalized_volume = 0.0;  // count scaled to [0, 100] by the dataset max
  VolumeBucket volume_bucket = VolumeBucket::Low;
  int active_quarters = 0;
  int total_quarters = 0;
  double distribution_fraction = 0.0;
  DistributionBucket distribution_bucket = DistributionBucket::Sparse0To50;
};

/// One activity row per entity. HIGH means strictly above the mean
/// normalized volume; distribution buckets follow the fraction of active
/// quarters (==1 persistent, (0.5,1) intermittent, <=0.5 sparse).
/// Requires quarters assigned; throws on a corpus with zero entities.
std::vector<EntityActivity> compute_entity_activity(const Corpus& corpus);

enum class VolumeFilter { All, High, Low };
enum class DistributionFilter { All, Persistent100, Intermittent51To99, Sparse0To50 };

VolumeFilter volume_filter_from_name(const std::string& name);
DistributionFilter distribution_filter_from_name(const std::string& name);
std::string to_string(VolumeFilter filter);
std::string to_string(DistributionFilter filter);

struct ScenarioFilter {
  VolumeFilter volume = VolumeFilter::All;
  DistributionFilter distribution = DistributionFilter::All;

  bool is_base() const {
    return volume == VolumeFilter::All && distribution == DistributionFilter::All;
  }
  std::string label() const;

  bool operator==(const ScenarioFilter&) const = default;
};

/// The Base case plus the six volume x distribution robustness scenarios.
std::vector<ScenarioFilter> default_scenarios();

/// Subset of the corpus whose entities match both predicates.
/// (All, All) returns the full corpus; an empty subset is a valid result.
Corpus segment(const Corpus& corpus, const std::vector<EntityActivity>& activity,
               const ScenarioFilter& filter);

struct ConcentrationStats {
  double share_target = 0.0;       // requested volume share
  std::size_t entities_needed = 0; // fewest entities reaching the share
  double entity_fraction = 0.0;    // entities_needed / |entities|
  double volume_share = 0.0;       // share actually held by those entities
};

/// Smallest entity fraction whose cumulative review volume reaches
/// `share_target` (entities taken in descending volume order).
ConcentrationStats concentration_stats(const std::vector<EntityActivity>& activity,
                                       double share_target);

/// Inverse view: volume share held by the top `entity_fraction` of entities.
double volume_share_of_top(const std::vector<EntityActivity>& activity,
                           double entity_fraction);

void save_activity_csv(const std::vector<EntityActivity>& activity,
                       const std::string& path);
std::vector<EntityActivity> load_activity_csv(const std::string& path);

}  // namespace ssas
