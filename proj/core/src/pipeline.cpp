#include "ssas/pipeline.hpp"

#include <ctime>
#include <filesystem>
#include <functional>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ssas/evaluation.hpp"
#include "ssas/scoring.hpp"
#include "ssas/util.hpp"

namespace ssas {
namespace {

using nlohmann::json;

ScenarioFilter scenario_from_json(const json& obj) {
  ScenarioFilter filter;
  filter.volume = volume_filter_from_name(obj.value("volume", "all"));
  filter.distribution =
      distribution_filter_from_name(obj.value("distribution", "all"));
  return filter;
}

json scenario_to_json(const ScenarioFilter& filter) {
  return json{{"volume", to_string(filter.volume)},
              {"distribution", to_string(filter.distribution)}};
}

/// Per-stage record of input/param/output content hashes. A stage reruns
/// whenever any of the three no longer matches the filesystem.
class Manifest {
 public:
  explicit Manifest(std::string path) : path_(std::move(path)) {
    if (file_exists(path_)) {
      doc_ = json::parse(read_file(path_), nullptr, false);
      if (doc_.is_discarded() || !doc_.is_object()) doc_ = json::object();
    } else {
      doc_ = json::object();
    }
  }

  bool up_to_date(const std::string& stage, const std::vector<std::string>& inputs,
                  const std::string& params_hash,
                  const std::vector<std::string>& outputs) const {
    auto it = doc_.find(stage);
    if (it == doc_.end()) return false;
    const json& entry = *it;
    if (entry.value("params", "") != params_hash) return false;
    auto files_match = [&](const char* key, const std::vector<std::string>& files) {
      const json& table = entry.value(key, json::object());
      if (table.size() != files.size()) return false;
      for (const auto& file : files) {
        if (!file_exists(file)) return false;
        auto rec = table.find(file);
        if (rec == table.end()) return false;
        if (rec->get<std::string>() != std::to_string(hash_file(file))) return false;
      }
      return true;
    };
    return files_match("inputs", inputs) && files_match("outputs", outputs);
  }

  void record(const std::string& stage, const std::vector<std::string>& inputs,
              const std::string& params_hash,
              const std::vector<std::string>& outputs) {
    json entry;
    entry["params"] = params_hash;
    for (const auto& file : inputs) {
      entry["inputs"][file] = std::to_string(hash_file(file));
    }
    for (const auto& file : outputs) {
      entry["outputs"][file] = std::to_string(hash_file(file));
    }
    doc_[stage] = std::move(entry);
    write_file(path_, doc_.dump(2) + "\n");
  }

 private:
  std::string path_;
  json doc_;
};

std::string hash_params(const json& params) {
  return std::to_string(fnv1a64(params.dump()));
}

std::unique_ptr<LlmBackend> make_backend(const PipelineConfig& config) {
  if (config.backend_kind == "mock") {
    return mock_backend(config.mock.seed, config.mock.base_noise);
  }
  if (config.backend_kind == "http") {
    return http_backend(config.http);
  }
  throw std::invalid_argument("unknown backend kind: " + config.backend_kind);
}

json backend_params(const PipelineConfig& config) {
  json params;
  params["kind"] = config.backend_kind;
  if (config.backend_kind == "mock") {
    params["seed"] = config.mock.seed;
    params["base_noise"] = config.mock.base_noise;
  } else {
    params["endpoint"] = config.http.endpoint;
    params["model"] = config.http.model;
    if (config.http.temperature) params["temperature"] = *config.http.temperature;
  }
  return params;
}

void write_run_metadata(const PipelineConfig& config, Method method,
                        const std::string& path) {
  json meta;
  meta["method"] = to_string(method);
  meta["n_runs"] = config.n_runs;
  meta["seed"] = config.run_seed;
  meta["backend"] = backend_params(config);
  meta["started_at"] = std::to_string(std::time(nullptr));
  write_file(path, meta.dump(2) + "\n");
}

}  // namespace

PipelineConfig pipeline_config_from_json(const std::string& text) {
  const json doc = json::parse(text);
  PipelineConfig config;
  if (doc.contains("dataset")) {
    const json& dataset = doc.at("dataset");
    config.dataset_name = dataset.value("name", "");
    config.schema = dataset.value("schema", "generic");
    config.input_path = dataset.value("input", "");
  }
  if (doc.contains("hierarchy")) {
    const json& h = doc.at("hierarchy");
    config.hierarchy.seed = h.value("seed", config.hierarchy.seed);
    config.hierarchy.theme_threshold =
        h.value("theme_threshold", config.hierarchy.theme_threshold);
    config.hierarchy.story_threshold =
        h.value("story_threshold", config.hierarchy.story_threshold);
    config.hierarchy.cluster_threshold =
        h.value("cluster_threshold", config.hierarchy.cluster_threshold);
    config.hierarchy.max_fanout = h.value("max_fanout", config.hierarchy.max_fanout);
    config.hierarchy.keyword_profile_size =
        h.value("keyword_profile_size", config.hierarchy.keyword_profile_size);
  }
  if (doc.contains("summaries")) {
    const json& s = doc.at("summaries");
    config.budgets.cluster = s.value("cluster_budget", config.budgets.cluster);
    config.budgets.story = s.value("story_budget", config.budgets.story);
    config.budgets.theme = s.value("theme_budget", config.budgets.theme);
  }
  if (doc.contains("gate")) {
    config.gate_threshold = doc.at("gate").value("threshold", config.gate_threshold);
  }
  if (doc.contains("runs")) {
    const json& r = doc.at("runs");
    config.n_runs = r.value("n_runs", config.n_runs);
    config.run_seed = r.value("seed", config.run_seed);
  }
  if (doc.contains("backend")) {
    const json& b = doc.at("backend");
    config.backend_kind = b.value("kind", config.backend_kind);
    config.mock.seed = b.value("seed", config.mock.seed);
    config.mock.base_noise = b.value("base_noise", config.mock.base_noise);
    config.http.endpoint = b.value("endpoint", config.http.endpoint);
    config.http.model = b.value("model", config.http.model);
    if (b.contains("temperature") && !b.at("temperature").is_null()) {
      config.http.temperature = b.at("temperature").get<double>();
    }
    config.http.timeout_ms = b.value("timeout_ms", config.http.timeout_ms);
    config.http.max_retries = b.value("max_retries", config.http.max_retries);
    config.http.api_key_env = b.value("api_key_env", config.http.api_key_env);
    config.http.response_path = b.value("response_path", config.http.response_path);
    config.http.requests_per_second =
        b.value("requests_per_second", config.http.requests_per_second);
  }
  if (doc.contains("scenarios")) {
    config.scenarios.clear();
    for (const auto& item : doc.at("scenarios")) {
      config.scenarios.push_back(scenario_from_json(item));
    }
  }
  return config;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  return pipeline_config_from_json(read_file(path));
}

std::string pipeline_config_to_json(const PipelineConfig& config) {
  json doc;
  doc["dataset"] = {{"name", config.dataset_name},
                    {"schema", config.schema},
                    {"input", config.input_path}};
  doc["hierarchy"] = {{"seed", config.hierarchy.seed},
                      {"theme_threshold", config.hierarchy.theme_threshold},
                      {"story_threshold", config.hierarchy.story_threshold},
                      {"cluster_threshold", config.hierarchy.cluster_threshold},
                      {"max_fanout", config.hierarchy.max_fanout},
                      {"keyword_profile_size", config.hierarchy.keyword_profile_size}};
  doc["summaries"] = {{"cluster_budget", config.budgets.cluster},
                      {"story_budget", config.budgets.story},
                      {"theme_budget", config.budgets.theme}};
  doc["gate"] = {{"threshold", config.gate_threshold}};
  doc["runs"] = {{"n_runs", config.n_runs}, {"seed", config.run_seed}};
  doc["backend"] = backend_params(config);
  doc["scenarios"] = json::array();
  for (const auto& scenario : config.scenarios) {
    doc["scenarios"].push_back(scenario_to_json(scenario));
  }
  return doc.dump(2) + "\n";
}

PipelineResult run_pipeline(const PipelineConfig& config, const std::string& workdir) {
  namespace fs = std::filesystem;
  fs::create_directories(workdir);
  const auto path = [&](const std::string& name) {
    return (fs::path(workdir) / name).string();
  };

  Manifest manifest(path("manifest.json"));
  PipelineResult result;

  auto stage = [&](const std::string& name, const std::vector<std::string>& inputs,
                   const json& params, const std::vector<std::string>& outputs,
                   const std::function<void()>& body) {
    const std::string params_hash = hash_params(params);
    if (manifest.up_to_date(name, inputs, params_hash, outputs)) {
      result.stages.push_back(StageOutcome{name, true});
      return;
    }
    try {
      body();
    } catch (const std::exception& e) {
      throw PipelineError(name, e.what());
    }
    manifest.record(name, inputs, params_hash, outputs);
    result.stages.push_back(StageOutcome{name, false});
  };

  const std::string corpus_file = path("corpus.jsonl");
  const std::string activity_file = path("activity.csv");
  const std::string hierarchy_file = path("hierarchy.json");
  const std::string assignments_file = path("assignments.csv");
  const std::string summaries_file = path("summaries.json");
  const std::string scores_file = path("scores.csv");
  const std::string gate_file = path("gate.csv");
  const std::string outliers_file = path("outliers.csv");
  const std::string direct_file = path("runs_direct.csv");
  const std::string ssas_file = path("runs_ssas.csv");
  const std::string evaluation_file = path("evaluation.json");
  const std::string report_json_file = path("report.json");
  const std::string report_csv_file = path("report.csv");
  const std::string chart_file = path("chart_data.csv");

  result.artifacts = {{"corpus", corpus_file},
                      {"activity", activity_file},
                      {"hierarchy", hierarchy_file},
                      {"assignments", assignments_file},
                      {"summaries", summaries_file},
                      {"scores", scores_file},
                      {"gate", gate_file},
                      {"outliers", outliers_file},
                      {"runs_direct", direct_file},
                      {"runs_ssas", ssas_file},
                      {"evaluation", evaluation_file},
                      {"report_json", report_json_file},
                      {"report_csv", report_csv_file},
                      {"chart_data", chart_file}};

  stage("ingest", {config.input_path}, json{{"schema", config.schema}},
        {corpus_file}, [&] {
          auto ingested = ingest(config.input_path, schema_from_name(config.schema),
                                 config.dataset_name);
          assign_quarters(ingested.corpus);
          save_corpus_jsonl(ingested.corpus, corpus_file);
        });

  stage("characterize", {corpus_file}, json::object(), {activity_file}, [&] {
    const Corpus corpus = load_corpus_jsonl(corpus_file, config.dataset_name);
    save_activity_csv(compute_entity_activity(corpus), activity_file);
  });

  stage("classify", {corpus_file},
        json{{"seed", config.hierarchy.seed},
             {"theme_threshold", config.hierarchy.theme_threshold},
             {"story_threshold", config.hierarchy.story_threshold},
             {"cluster_threshold", config.hierarchy.cluster_threshold},
             {"max_fanout", config.hierarchy.max_fanout},
             {"keyword_profile_size", config.hierarchy.keyword_profile_size}},
        {hierarchy_file, assignments_file}, [&] {
          const Corpus corpus = load_corpus_jsonl(corpus_file, config.dataset_name);
          auto [hierarchy, assignments] = build_hierarchy(corpus, config.hierarchy);
          save_hierarchy(hierarchy, hierarchy_file);
          save_assignments_csv(assignments, assignments_file);
        });

  stage("summarize", {corpus_file, hierarchy_file},
        json{{"cluster_budget", config.budgets.cluster},
             {"story_budget", config.budgets.story},
             {"theme_budget", config.budgets.theme}},
        {summaries_file}, [&] {
          const Corpus corpus = load_corpus_jsonl(corpus_file, config.dataset_name);
          const Hierarchy hierarchy = load_hierarchy(hierarchy_file);
          const ExtractiveSummarizer summarizer;
          save_summaries(
              summarize_hierarchy(corpus, hierarchy, config.budgets, summarizer),
              summaries_file);
        });

  stage("score", {corpus_file, hierarchy_file, assignments_file}, json::object(),
        {scores_file}, [&] {
          const Corpus corpus = load_corpus_jsonl(corpus_file, config.dataset_name);
          const Hierarchy hierarchy = load_hierarchy(hierarchy_file);
          const auto assignments = load_assignments_csv(assignments_file);
          save_scores_csv(compute_all_snr(corpus, assignments, hierarchy),
                          scores_file);
        });

  stage("gate", {assignments_file, scores_file},
        json{{"threshold", config.gate_threshold}}, {gate_file, outliers_file}, [&] {
          const auto assignments = load_assignments_csv(assignments_file);
          const auto scores = load_scores_csv(scores_file);
          const auto stats = gate_clusters(assignments, scores, config.gate_threshold);
          save_gate_csv(stats, gate_file);
          save_outliers(flag_outliers(assignments, stats), outliers_file);
        });

  const json predict_params = {{"n_runs", config.n_runs},
                               {"seed", config.run_seed},
                               {"backend", backend_params(config)}};

  stage("predict_direct", {corpus_file}, predict_params, {direct_file}, [&] {
    const Corpus corpus = load_corpus_jsonl(corpus_file, config.dataset_name);
    std::vector<Prompt> prompts;
    prompts.reserve(corpus.reviews.size());
    for (const auto& review : corpus.reviews) {
      prompts.push_back(build_prompt(review, Method::Direct));
    }
    auto backend = make_backend(config);
    RunOptions options;
    options.n_runs = config.n_runs;
    options.seed = config.run_seed;
    options.max_retries = config.http.max_retries;
    options.checkpoint_path = direct_file + ".partial";
    save_run_matrix_csv(run_experiment(prompts, *backend, options), direct_file);
    std::error_code ec;
    fs::remove(options.checkpoint_path, ec);
    write_run_metadata(config, Method::Direct, path("runmeta_direct.json"));
  });

  stage("predict_ssas",
        {corpus_file, assignments_file, summaries_file, scores_file},
        predict_params, {ssas_file}, [&] {
          const Corpus corpus = load_corpus_jsonl(corpus_file, config.dataset_name);
          const auto assignments = load_assignments_csv(assignments_file);
          const SummarySet summaries = load_summaries(summaries_file);
          const auto scores = load_scores_csv(scores_file);
          std::map<std::string, const HierarchyAssignment*> assignment_by_id;
          for (const auto& a : assignments) assignment_by_id[a.review_id] = &a;
          std::map<std::string, double> signal_by_id;
          // SNR total in [0,3] scaled to the unit interval.
          for (const auto& s : scores) signal_by_id[s.review_id] = s.total / 3.0;

          std::vector<Prompt> prompts;
          prompts.reserve(corpus.reviews.size());
          for (const auto& review : corpus.reviews) {
            auto it = assignment_by_id.find(review.id);
            if (it == assignment_by_id.end()) {
              throw std::runtime_error("no assignment for review " + review.id);
            }
            const double signal = signal_by_id.count(review.id)
                                      ? signal_by_id.at(review.id)
                                      : 0.0;
            prompts.push_back(
                build_prompt(review, *it->second, summaries, signal));
          }
          auto backend = make_backend(config);
          RunOptions options;
          options.n_runs = config.n_runs;
          options.seed = config.run_seed;
          options.max_retries = config.http.max_retries;
          options.checkpoint_path = ssas_file + ".partial";
          save_run_matrix_csv(run_experiment(prompts, *backend, options), ssas_file);
          std::error_code ec;
          fs::remove(options.checkpoint_path, ec);
          write_run_metadata(config, Method::Ssas, path("runmeta_ssas.json"));
        });

  json scenarios_param = json::array();
  for (const auto& scenario : config.scenarios) {
    scenarios_param.push_back(scenario_to_json(scenario));
  }

  stage("evaluate",
        {corpus_file, activity_file, assignments_file, outliers_file, direct_file,
         ssas_file},
        json{{"scenarios", scenarios_param}}, {evaluation_file}, [&] {
          const Corpus corpus = load_corpus_jsonl(corpus_file, config.dataset_name);
          const auto activity = load_activity_csv(activity_file);
          const auto assignments = load_assignments_csv(assignments_file);
          const auto outliers = load_outliers(outliers_file);
          const RunMatrix direct = load_run_matrix_csv(direct_file, Method::Direct);
          const RunMatrix ssas = load_run_matrix_csv(ssas_file, Method::Ssas);

          const auto without_irrelevant = stage_filter(
              corpus, assignments, outliers, RefinementStage::WithoutIrrelevant);
          const auto without_both =
              stage_filter(corpus, assignments, outliers,
                           RefinementStage::WithoutIrrelevantOutlier);

          std::vector<ScenarioInput> cells;
          for (const auto& scenario : config.scenarios) {
            const Corpus subset = segment(corpus, activity, scenario);
            ScenarioInput input;
            input.dataset = corpus.dataset_name;
            input.scenario = scenario;
            for (const auto& review : subset.reviews) {
              input.all_ids.insert(review.id);
              if (without_irrelevant.count(review.id)) {
                input.without_irrelevant.insert(review.id);
              }
              if (without_both.count(review.id)) {
                input.without_irrelevant_outlier.insert(review.id);
              }
            }
            cells.push_back(std::move(input));
          }
          save_report_json(build_report(direct, ssas, cells), evaluation_file);
        });

  stage("report", {evaluation_file}, json::object(),
        {report_json_file, report_csv_file, chart_file}, [&] {
          const Report report = load_report_json(evaluation_file);
          save_report_json(report, report_json_file);
          write_file(report_csv_file, report_to_csv(report));
          write_file(chart_file, report_chart_data_csv(report));
        });

  return result;
}

}  // namespace ssas
