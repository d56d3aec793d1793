#include "ssas/evaluation.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ssas/csv.hpp"
#include "ssas/util.hpp"

namespace ssas {

using nlohmann::json;

std::string to_string(ConsistencyLabel label) {
  switch (label) {
    case ConsistencyLabel::ConsistentPositive: return "consistent_positive";
    case ConsistencyLabel::ConsistentNegative: return "consistent_negative";
    case ConsistencyLabel::ConsistentNeutral: return "consistent_neutral";
    case ConsistencyLabel::Inconsistent: return "inconsistent";
  }
  return "inconsistent";
}

ConsistencyLabel classify_consistency(const std::vector<SentimentLabel>& labels) {
  if (labels.empty()) {
    throw std::invalid_argument("classify_consistency: empty label sequence");
  }
  const SentimentLabel first = labels.front();
  for (const auto label : labels) {
    if (label != first) return ConsistencyLabel::Inconsistent;
  }
  switch (first) {
    case SentimentLabel::Positive: return ConsistencyLabel::ConsistentPositive;
    case SentimentLabel::Negative: return ConsistencyLabel::ConsistentNegative;
    case SentimentLabel::Neutral: return ConsistencyLabel::ConsistentNeutral;
  }
  return ConsistencyLabel::Inconsistent;
}

std::uint64_t StageCounts::count(ConsistencyLabel label) const {
  switch (label) {
    case ConsistencyLabel::ConsistentPositive: return positive;
    case ConsistencyLabel::ConsistentNegative: return negative;
    case ConsistencyLabel::ConsistentNeutral: return neutral;
    case ConsistencyLabel::Inconsistent: return inconsistent;
  }
  return 0;
}

std::map<std::string, ConsistencyLabel> consistency_labels(const RunMatrix& matrix) {
  std::map<std::string, ConsistencyLabel> labels;
  for (std::size_t i = 0; i < matrix.review_ids.size(); ++i) {
    labels[matrix.review_ids[i]] = classify_consistency(matrix.labels[i]);
  }
  return labels;
}

StageCounts stage_counts(const RunMatrix& matrix,
                         const std::set<std::string>& stage_set) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < matrix.review_ids.size(); ++i) {
    index[matrix.review_ids[i]] = i;
  }
  StageCounts counts;
  for (const auto& id : stage_set) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw std::invalid_argument("stage_counts: unknown review id " + id);
    }
    switch (classify_consistency(matrix.labels[it->second])) {
      case ConsistencyLabel::ConsistentPositive: ++counts.positive; break;
      case ConsistencyLabel::ConsistentNegative: ++counts.negative; break;
      case ConsistencyLabel::ConsistentNeutral: ++counts.neutral; break;
      case ConsistencyLabel::Inconsistent: ++counts.inconsistent; break;
    }
  }
  return counts;
}

std::array<std::uint64_t, 4> ConfusionMatrix::row_sums() const {
  std::array<std::uint64_t, 4> sums{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) sums[r] += cells[r][c];
  return sums;
}

std::array<std::uint64_t, 4> ConfusionMatrix::col_sums() const {
  std::array<std::uint64_t, 4> sums{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) sums[c] += cells[r][c];
  return sums;
}

std::uint64_t ConfusionMatrix::grand_total() const {
  std::uint64_t total = 0;
  for (const auto& row : cells)
    for (const auto cell : row) total += cell;
  return total;
}

ConfusionMatrix confusion(const std::map<std::string, ConsistencyLabel>& direct,
                          const std::map<std::string, ConsistencyLabel>& ssas,
                          const std::set<std::string>& stage_set) {
  ConfusionMatrix matrix;
  for (const auto& id : stage_set) {
    auto d = direct.find(id);
    auto s = ssas.find(id);
    if (d == direct.end() || s == ssas.end()) {
      throw std::invalid_argument("confusion: review " + id +
                                  " missing from a label map");
    }
    matrix.cells[static_cast<int>(d->second)][static_cast<int>(s->second)] += 1;
  }
  return matrix;
}

CellKind cell_kind(int direct_row, int ssas_col) {
  if (direct_row == ssas_col) return CellKind::Unchanged;
  const int inconsistent = static_cast<int>(ConsistencyLabel::Inconsistent);
  if (direct_row == inconsistent) return CellKind::Gained;
  if (ssas_col == inconsistent) return CellKind::Lost;
  return CellKind::Flipped;
}

double net_consistency(const StageCounts& direct, const StageCounts& ssas) {
  if (direct.total() != ssas.total()) {
    throw std::invalid_argument("net_consistency: totals differ (" +
                                std::to_string(direct.total()) + " vs " +
                                std::to_string(ssas.total()) + ")");
  }
  const std::uint64_t total = direct.total();
  if (total == 0) return 0.0;
  const auto d = direct.as_array();
  const auto s = ssas.as_array();
  std::uint64_t moved = 0;
  for (int i = 0; i < 4; ++i) {
    moved += d[i] > s[i] ? d[i] - s[i] : s[i] - d[i];
  }
  return 100.0 * static_cast<double>(moved) / static_cast<double>(total);
}

double data_conditioning(std::uint64_t original_total, std::uint64_t stage_total) {
  if (original_total == 0) {
    throw std::invalid_argument("data_conditioning: original total is zero");
  }
  if (stage_total > original_total) {
    throw std::invalid_argument("data_conditioning: stage total exceeds original");
  }
  return 100.0 * static_cast<double>(original_total - stage_total) /
         static_cast<double>(original_total);
}

double total_improvement(double net, double conditioning) {
  if (net < 0 || conditioning < 0) {
    throw std::invalid_argument("total_improvement: negative component");
  }
  return net + conditioning;
}

namespace {

std::array<StageMetrics, 3> metrics_from_counts(
    const std::array<StageCounts, 3>& direct,
    const std::array<StageCounts, 3>& ssas) {
  std::array<StageMetrics, 3> metrics{};
  const std::uint64_t original = direct[0].total();
  for (int stage = 0; stage < 3; ++stage) {
    metrics[stage].net_consistency = net_consistency(direct[stage], ssas[stage]);
    metrics[stage].data_conditioning =
        original == 0 ? 0.0 : data_conditioning(original, direct[stage].total());
    metrics[stage].total_improvement = total_improvement(
        metrics[stage].net_consistency, metrics[stage].data_conditioning);
  }
  return metrics;
}

}  // namespace

ScenarioCell evaluate_cell(const RunMatrix& direct, const RunMatrix& ssas,
                           const ScenarioInput& input) {
  ScenarioCell cell;
  cell.dataset = input.dataset;
  cell.scenario = input.scenario;
  cell.datapoints = {input.all_ids.size(), input.without_irrelevant.size(),
                     input.without_irrelevant_outlier.size()};
  cell.no_datapoints = input.all_ids.empty();
  if (cell.no_datapoints) return cell;

  const auto direct_labels = consistency_labels(direct);
  const auto ssas_labels = consistency_labels(ssas);
  const std::array<const std::set<std::string>*, 3> stages = {
      &input.all_ids, &input.without_irrelevant, &input.without_irrelevant_outlier};
  for (int stage = 0; stage < 3; ++stage) {
    cell.direct_counts[stage] = stage_counts(direct, *stages[stage]);
    cell.ssas_counts[stage] = stage_counts(ssas, *stages[stage]);
    cell.confusion[stage] = confusion(direct_labels, ssas_labels, *stages[stage]);
  }
  cell.metrics = metrics_from_counts(cell.direct_counts, cell.ssas_counts);
  return cell;
}

ScenarioCell cell_from_counts(const std::string& dataset,
                              const ScenarioFilter& scenario,
                              const std::array<StageCounts, 3>& direct,
                              const std::array<StageCounts, 3>& ssas) {
  ScenarioCell cell;
  cell.dataset = dataset;
  cell.scenario = scenario;
  cell.direct_counts = direct;
  cell.ssas_counts = ssas;
  cell.datapoints = {direct[0].total(), direct[1].total(), direct[2].total()};
  cell.no_datapoints = direct[0].total() == 0;
  if (!cell.no_datapoints) cell.metrics = metrics_from_counts(direct, ssas);
  return cell;
}

Report build_report(const RunMatrix& direct, const RunMatrix& ssas,
                    const std::vector<ScenarioInput>& cells) {
  Report report;
  report.rows.reserve(cells.size());
  for (const auto& input : cells) {
    report.rows.push_back(evaluate_cell(direct, ssas, input));
  }
  return report;
}

namespace {

json counts_to_json(const StageCounts& counts) {
  return json{{"positive", counts.positive},
              {"negative", counts.negative},
              {"neutral", counts.neutral},
              {"inconsistent", counts.inconsistent},
              {"total", counts.total()}};
}

StageCounts counts_from_json(const json& obj) {
  StageCounts counts;
  counts.positive = obj.at("positive").get<std::uint64_t>();
  counts.negative = obj.at("negative").get<std::uint64_t>();
  counts.neutral = obj.at("neutral").get<std::uint64_t>();
  counts.inconsistent = obj.at("inconsistent").get<std::uint64_t>();
  return counts;
}

json cell_to_json(const ScenarioCell& cell) {
  json obj;
  obj["dataset"] = cell.dataset;
  obj["scenario"] = {{"volume", to_string(cell.scenario.volume)},
                     {"distribution", to_string(cell.scenario.distribution)}};
  obj["no_datapoints"] = cell.no_datapoints;
  obj["datapoints"] = cell.datapoints;
  static const char* stage_names[3] = {"all", "without_irrelevant",
                                       "without_irrelevant_outlier"};
  for (int stage = 0; stage < 3; ++stage) {
    json s;
    s["direct"] = counts_to_json(cell.direct_counts[stage]);
    s["ssas"] = counts_to_json(cell.ssas_counts[stage]);
    s["confusion"] = cell.confusion[stage].cells;
    // Off-diagonal movement, keyed the way the matrices are read.
    std::uint64_t gained = 0, lost = 0, flipped = 0;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        switch (cell_kind(r, c)) {
          case CellKind::Unchanged: break;
          case CellKind::Gained: gained += cell.confusion[stage].cells[r][c]; break;
          case CellKind::Lost: lost += cell.confusion[stage].cells[r][c]; break;
          case CellKind::Flipped: flipped += cell.confusion[stage].cells[r][c]; break;
        }
      }
    }
    s["consistency_gained"] = gained;
    s["consistency_lost"] = lost;
    s["consistent_label_flipped"] = flipped;
    if (!cell.no_datapoints) {
      s["net_consistency"] = cell.metrics[stage].net_consistency;
      s["data_conditioning"] = cell.metrics[stage].data_conditioning;
      s["total_improvement"] = cell.metrics[stage].total_improvement;
    }
    obj["stages"][stage_names[stage]] = std::move(s);
  }
  return obj;
}

ScenarioCell cell_from_json(const json& obj) {
  ScenarioCell cell;
  cell.dataset = obj.at("dataset").get<std::string>();
  cell.scenario.volume =
      volume_filter_from_name(obj.at("scenario").at("volume").get<std::string>());
  cell.scenario.distribution = distribution_filter_from_name(
      obj.at("scenario").at("distribution").get<std::string>());
  cell.no_datapoints = obj.at("no_datapoints").get<bool>();
  const auto datapoints = obj.at("datapoints").get<std::vector<std::uint64_t>>();
  for (int i = 0; i < 3 && i < static_cast<int>(datapoints.size()); ++i) {
    cell.datapoints[i] = datapoints[i];
  }
  static const char* stage_names[3] = {"all", "without_irrelevant",
                                       "without_irrelevant_outlier"};
  for (int stage = 0; stage < 3; ++stage) {
    const json& s = obj.at("stages").at(stage_names[stage]);
    cell.direct_counts[stage] = counts_from_json(s.at("direct"));
    cell.ssas_counts[stage] = counts_from_json(s.at("ssas"));
    const auto grid =
        s.at("confusion").get<std::array<std::array<std::uint64_t, 4>, 4>>();
    cell.confusion[stage].cells = grid;
    if (!cell.no_datapoints) {
      cell.metrics[stage].net_consistency = s.at("net_consistency").get<double>();
      cell.metrics[stage].data_conditioning =
          s.at("data_conditioning").get<double>();
      cell.metrics[stage].total_improvement =
          s.at("total_improvement").get<double>();
    }
  }
  return cell;
}

}  // namespace

std::string report_to_json(const Report& report) {
  json doc;
  doc["rows"] = json::array();
  for (const auto& cell : report.rows) doc["rows"].push_back(cell_to_json(cell));
  return doc.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const json doc = json::parse(text);
  Report report;
  for (const auto& row : doc.at("rows")) report.rows.push_back(cell_from_json(row));
  return report;
}

std::string report_to_csv(const Report& report) {
  CsvWriter writer({"scenario", "volume", "distribution", "dataset", "all",
                    "wo_irrelevant", "wo_irrelevant_outlier", "net_all",
                    "cond_all", "total_all", "net_wo_irr", "cond_wo_irr",
                    "total_wo_irr", "net_wo_irr_out", "cond_wo_irr_out",
                    "total_wo_irr_out"});
  for (const auto& cell : report.rows) {
    std::vector<std::string> row;
    row.push_back(cell.scenario.is_base() ? "base" : cell.scenario.label());
    row.push_back(to_string(cell.scenario.volume));
    row.push_back(to_string(cell.scenario.distribution));
    row.push_back(cell.dataset);
    for (int i = 0; i < 3; ++i) row.push_back(std::to_string(cell.datapoints[i]));
    for (int stage = 0; stage < 3; ++stage) {
      if (cell.no_datapoints) {
        row.insert(row.end(), {"--", "--", "--"});
      } else {
        row.push_back(format_fixed(cell.metrics[stage].net_consistency, 2));
        row.push_back(format_fixed(cell.metrics[stage].data_conditioning, 2));
        row.push_back(format_fixed(cell.metrics[stage].total_improvement, 2));
      }
    }
    writer.add_row(std::move(row));
  }
  return writer.str();
}

std::string report_chart_data_csv(const Report& report) {
  CsvWriter writer({"dataset", "scenario", "stage", "total_improvement"});
  static const char* stage_names[3] = {"all", "without_irrelevant",
                                       "without_irrelevant_outlier"};
  for (const auto& cell : report.rows) {
    if (cell.no_datapoints) continue;
    for (int stage = 0; stage < 3; ++stage) {
      writer.add_row({cell.dataset, cell.scenario.label(), stage_names[stage],
                      format_double(cell.metrics[stage].total_improvement)});
    }
  }
  return writer.str();
}

void save_report_json(const Report& report, const std::string& path) {
  write_file(path, report_to_json(report));
}

Report load_report_json(const std::string& path) {
  return report_from_json(read_file(path));
}

}  // namespace ssas
