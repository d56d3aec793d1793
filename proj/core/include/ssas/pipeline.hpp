#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ssas/characterize.hpp"
#include "ssas/context.hpp"
#include "ssas/corpus.hpp"
#include "ssas/hierarchy.hpp"
#include "ssas/inference.hpp"

namespace ssas {

struct MockSettings {
  std::uint64_t seed = 7;
  double base_noise = 0.3;
};

struct PipelineConfig {
  std::string dataset_name;
  std::string schema = "generic";
  std::string input_path;

  HierarchyConfig hierarchy;
  SummaryBudgets budgets;
  double gate_threshold = 0.1;

  int n_runs = 10;
  std::uint64_t run_seed = 0;

  std::string backend_kind = "mock";  // mock | http
  MockSettings mock;
  BackendConfig http;

  std::vector<ScenarioFilter> scenarios = default_scenarios();
};

PipelineConfig pipeline_config_from_json(const std::string& text);
PipelineConfig load_pipeline_config(const std::string& path);
std::string pipeline_config_to_json(const PipelineConfig& config);

struct StageOutcome {
  std::string name;
  bool skipped = false;
};

struct PipelineResult {
  std::vector<StageOutcome> stages;
  std::map<std::string, std::string> artifacts;  // logical name -> path
};

struct PipelineError : std::runtime_error {
  std::string stage;
  PipelineError(std::string stage_name, const std::string& what)
      : std::runtime_error("stage '" + stage_name + "' failed: " + what),
        stage(std::move(stage_name)) {}
};

/// Run ingest -> characterize -> classify -> summarize -> score -> gate ->
/// predict (both methods) -> evaluate -> report inside `workdir`. Every
/// stage writes plain CSV/JSON artifacts and is skipped when the manifest
/// shows its inputs, parameters and outputs unchanged.
PipelineResult run_pipeline(const PipelineConfig& config, const std::string& workdir);

}  // namespace ssas
