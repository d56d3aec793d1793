#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ssas/characterize.hpp"
#include "ssas/inference.hpp"

namespace ssas {

enum class ConsistencyLabel {
  ConsistentPositive = 0,
  ConsistentNegative = 1,
  ConsistentNeutral = 2,
  Inconsistent = 3,
};
std::string to_string(ConsistencyLabel label);

/// CONSISTENT_X iff every run produced X; anything else is INCONSISTENT.
/// Throws on an empty sequence.
ConsistencyLabel classify_consistency(const std::vector<SentimentLabel>& labels);

struct StageCounts {
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  std::uint64_t neutral = 0;
  std::uint64_t inconsistent = 0;

  std::uint64_t total() const { return positive + negative + neutral + inconsistent; }
  std::uint64_t count(ConsistencyLabel label) const;
  std::array<std::uint64_t, 4> as_array() const {
    return {positive, negative, neutral, inconsistent};
  }
  bool operator==(const StageCounts&) const = default;
};

std::map<std::string, ConsistencyLabel> consistency_labels(const RunMatrix& matrix);

/// Consistency-category counts over the given review-id subset.
/// Throws when the set names a review the matrix does not carry.
StageCounts stage_counts(const RunMatrix& matrix,
                         const std::set<std::string>& stage_set);

/// 4x4 grid: rows = DIRECT consistency label, columns = SSAS.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, 4>, 4> cells{};

  std::array<std::uint64_t, 4> row_sums() const;
  std::array<std::uint64_t, 4> col_sums() const;
  std::uint64_t grand_total() const;
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(const std::map<std::string, ConsistencyLabel>& direct,
                          const std::map<std::string, ConsistencyLabel>& ssas,
                          const std::set<std::string>& stage_set);

/// Reading guide for confusion cells off the diagonal: consistency gained
/// (was inconsistent), lost (became inconsistent), or a consistent label flip.
enum class CellKind { Unchanged, Gained, Lost, Flipped };
CellKind cell_kind(int direct_row, int ssas_col);

/// Total-normalized sum of absolute per-category differences between the
/// two methods' consistency counts, as a percentage. Symmetric in its
/// arguments; requires equal totals. Empty stages count as 0.
double net_consistency(const StageCounts& direct, const StageCounts& ssas);

/// Percentage of the original datapoints removed by a refinement stage.
double data_conditioning(std::uint64_t original_total, std::uint64_t stage_total);

double total_improvement(double net, double conditioning);

struct StageMetrics {
  double net_consistency = 0.0;
  double data_conditioning = 0.0;
  double total_improvement = 0.0;
};

/// Everything the report prints for one (scenario, dataset) cell.
struct ScenarioCell {
  std::string dataset;
  ScenarioFilter scenario;
  bool no_datapoints = false;
  std::array<std::uint64_t, 3> datapoints{};   // ALL, w/o irr, w/o irr+out
  std::array<StageCounts, 3> direct_counts{};
  std::array<StageCounts, 3> ssas_counts{};
  std::array<ConfusionMatrix, 3> confusion{};
  std::array<StageMetrics, 3> metrics{};
};

struct ScenarioInput {
  std::string dataset;
  ScenarioFilter scenario;
  // Stage sets already restricted to the scenario's segment.
  std::set<std::string> all_ids;
  std::set<std::string> without_irrelevant;
  std::set<std::string> without_irrelevant_outlier;
};

ScenarioCell evaluate_cell(const RunMatrix& direct, const RunMatrix& ssas,
                           const ScenarioInput& input);

/// Metrics/confusion recomputed from already-counted stage data; used when
/// the grids are not available (external fixtures).
ScenarioCell cell_from_counts(const std::string& dataset,
                              const ScenarioFilter& scenario,
                              const std::array<StageCounts, 3>& direct,
                              const std::array<StageCounts, 3>& ssas);

struct Report {
  std::vector<ScenarioCell> rows;
};

Report build_report(const RunMatrix& direct, const RunMatrix& ssas,
                    const std::vector<ScenarioInput>& cells);

std::string report_to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string report_to_csv(const Report& report);
/// Grouped-bar data series: dataset x stage x total improvement.
std::string report_chart_data_csv(const Report& report);

void save_report_json(const Report& report, const std::string& path);
Report load_report_json(const std::string& path);

}  // namespace ssas
