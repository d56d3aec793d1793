#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssas/characterize.hpp"
#include "ssas/context.hpp"
#include "ssas/corpus.hpp"
#include "ssas/evaluation.hpp"
#include "ssas/hierarchy.hpp"
#include "ssas/inference.hpp"
#include "ssas/pipeline.hpp"
#include "ssas/scoring.hpp"
#include "ssas/util.hpp"

namespace {

using namespace ssas;

struct GlobalOptions {
  std::string workdir;
  std::string config_path;
  std::optional<std::uint64_t> seed;
};

std::string resolve(const GlobalOptions& global, const std::string& path) {
  if (path.empty() || global.workdir.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(global.workdir) / p).string();
}

PipelineConfig effective_config(const GlobalOptions& global) {
  PipelineConfig config;
  if (!global.config_path.empty()) {
    config = load_pipeline_config(global.config_path);
  }
  if (global.seed) {
    config.hierarchy.seed = *global.seed;
    config.run_seed = *global.seed;
    config.mock.seed = *global.seed;
  }
  return config;
}

std::pair<std::string, std::string> split_pair(const std::string& joined) {
  const auto comma = joined.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError("--out expects two comma-separated paths");
  }
  return {joined.substr(0, comma), joined.substr(comma + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical context assessment and sentiment-consistency "
               "evaluation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions global;
  app.add_option("--workdir", global.workdir,
                 "Directory that relative artifact paths resolve against");
  app.add_option("--config", global.config_path, "Pipeline configuration file");
  app.add_option("--seed", global.seed, "Override every configured seed");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Normalize a review dataset");
  std::string ingest_schema = "generic", ingest_input, ingest_out, ingest_name;
  ingest_cmd->add_option("--schema", ingest_schema,
                         "generic|amazon|google|goodreads");
  ingest_cmd->add_option("--input", ingest_input, "JSONL or CSV input file")
      ->required();
  ingest_cmd->add_option("--out", ingest_out, "Canonical corpus file")->required();
  ingest_cmd->add_option("--dataset-name", ingest_name, "Dataset label");

  // characterize
  auto* characterize_cmd =
      app.add_subcommand("characterize", "Per-entity volume and distribution");
  std::string char_corpus, char_out;
  double char_share = 0.0;
  characterize_cmd->add_option("--corpus", char_corpus)->required();
  characterize_cmd->add_option("--out", char_out, "activity.csv")->required();
  characterize_cmd->add_option("--concentration-share", char_share,
                               "Also print concentration stats for this share");

  // segment
  auto* segment_cmd = app.add_subcommand("segment", "Slice a corpus by scenario");
  std::string seg_corpus, seg_activity, seg_volume = "all", seg_dist = "all", seg_out;
  segment_cmd->add_option("--corpus", seg_corpus)->required();
  segment_cmd->add_option("--activity", seg_activity)->required();
  segment_cmd->add_option("--volume", seg_volume, "high|low|all");
  segment_cmd->add_option("--distribution", seg_dist, "100|51-99|0-50|all");
  segment_cmd->add_option("--out", seg_out)->required();

  // classify
  auto* classify_cmd =
      app.add_subcommand("classify", "Build the theme/story/cluster hierarchy");
  std::string cls_corpus, cls_out;
  classify_cmd->add_option("--corpus", cls_corpus)->required();
  classify_cmd->add_option("--out", cls_out, "hierarchy.json,assignments.csv")
      ->required();

  // summarize
  auto* summarize_cmd =
      app.add_subcommand("summarize", "Bottom-up summary of summaries");
  std::string sum_hierarchy, sum_corpus, sum_out;
  summarize_cmd->add_option("--hierarchy", sum_hierarchy)->required();
  summarize_cmd->add_option("--corpus", sum_corpus)->required();
  summarize_cmd->add_option("--out", sum_out, "summaries.json")->required();

  // score
  auto* score_cmd = app.add_subcommand("score", "Per-review SNR components");
  std::string score_corpus, score_hierarchy, score_assignments, score_out;
  score_cmd->add_option("--corpus", score_corpus)->required();
  score_cmd->add_option("--hierarchy", score_hierarchy)->required();
  score_cmd->add_option("--assignments", score_assignments)->required();
  score_cmd->add_option("--out", score_out, "scores.csv")->required();

  // gate
  auto* gate_cmd = app.add_subcommand("gate", "Prune negligible clusters");
  std::string gate_assignments, gate_scores, gate_out, gate_outliers;
  double gate_threshold = 0.1;
  gate_cmd->add_option("--assignments", gate_assignments)->required();
  gate_cmd->add_option("--scores", gate_scores)->required();
  gate_cmd->add_option("--threshold", gate_threshold, "Retention threshold");
  gate_cmd->add_option("--out", gate_out, "gate.csv")->required();
  gate_cmd->add_option("--outliers", gate_outliers, "outliers.csv")->required();

  // predict
  auto* predict_cmd =
      app.add_subcommand("predict", "N sentiment runs for one method");
  std::string pred_method = "direct", pred_backend = "mock", pred_corpus, pred_out;
  std::string pred_assignments, pred_summaries, pred_scores;
  int pred_runs = 10;
  predict_cmd->add_option("--method", pred_method, "direct|ssas");
  predict_cmd->add_option("--runs", pred_runs, "Independent runs per review");
  predict_cmd->add_option("--backend", pred_backend, "mock|http");
  predict_cmd->add_option("--corpus", pred_corpus)->required();
  predict_cmd->add_option("--assignments", pred_assignments,
                          "Required for --method ssas");
  predict_cmd->add_option("--summaries", pred_summaries,
                          "Required for --method ssas");
  predict_cmd->add_option("--scores", pred_scores, "Required for --method ssas");
  predict_cmd->add_option("--out", pred_out)->required();

  // evaluate
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "Consistency metrics per scenario");
  std::string eval_corpus, eval_activity, eval_assignments, eval_outliers;
  std::string eval_direct, eval_ssas, eval_out;
  evaluate_cmd->add_option("--corpus", eval_corpus)->required();
  evaluate_cmd->add_option("--activity", eval_activity)->required();
  evaluate_cmd->add_option("--assignments", eval_assignments)->required();
  evaluate_cmd->add_option("--outliers", eval_outliers)->required();
  evaluate_cmd->add_option("--direct", eval_direct, "DIRECT run matrix")->required();
  evaluate_cmd->add_option("--ssas", eval_ssas, "SSAS run matrix")->required();
  evaluate_cmd->add_option("--out", eval_out, "evaluation.json")->required();

  // report
  auto* report_cmd = app.add_subcommand("report", "Merge evaluations into a report");
  std::vector<std::string> report_inputs;
  std::string report_out, report_format = "json", report_chart;
  report_cmd->add_option("--in", report_inputs, "evaluation.json files")
      ->required()
      ->expected(-1);
  report_cmd->add_option("--format", report_format, "csv|json");
  report_cmd->add_option("--out", report_out)->required();
  report_cmd->add_option("--chart-data", report_chart,
                         "Also write grouped-bar chart data here");

  // run
  auto* run_cmd = app.add_subcommand("run", "Full pipeline");
  std::string run_workdir;
  run_cmd->add_option("--workdir", run_workdir, "Artifact directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) {
      auto result = ingest(resolve(global, ingest_input),
                           schema_from_name(ingest_schema), ingest_name);
      assign_quarters(result.corpus);
      save_corpus_jsonl(result.corpus, resolve(global, ingest_out));
      std::cout << "ingested " << result.stats.valid << " reviews ("
                << result.stats.malformed << " malformed lines skipped)\n";
      for (const auto& issue : result.stats.sample_issues) {
        std::cout << "  " << issue << '\n';
      }
    } else if (*characterize_cmd) {
      const Corpus corpus = load_corpus_jsonl(resolve(global, char_corpus));
      const auto activity = compute_entity_activity(corpus);
      save_activity_csv(activity, resolve(global, char_out));
      std::cout << "characterized " << activity.size() << " entities\n";
      if (char_share > 0) {
        const auto stats = concentration_stats(activity, char_share);
        std::cout << format_fixed(100 * stats.volume_share, 1) << "% of volume held by "
                  << stats.entities_needed << " entities ("
                  << format_fixed(100 * stats.entity_fraction, 1) << "%)\n";
      }
    } else if (*segment_cmd) {
      const Corpus corpus = load_corpus_jsonl(resolve(global, seg_corpus));
      const auto activity = load_activity_csv(resolve(global, seg_activity));
      ScenarioFilter filter;
      filter.volume = volume_filter_from_name(seg_volume);
      filter.distribution = distribution_filter_from_name(seg_dist);
      const Corpus subset = segment(corpus, activity, filter);
      save_corpus_jsonl(subset, resolve(global, seg_out));
      std::cout << "segment " << filter.label() << ": " << subset.size()
                << " reviews\n";
    } else if (*classify_cmd) {
      const PipelineConfig config = effective_config(global);
      const Corpus corpus = load_corpus_jsonl(resolve(global, cls_corpus));
      auto [hierarchy_path, assignments_path] = split_pair(cls_out);
      auto [hierarchy, assignments] = build_hierarchy(corpus, config.hierarchy);
      save_hierarchy(hierarchy, resolve(global, hierarchy_path));
      save_assignments_csv(assignments, resolve(global, assignments_path));
      std::cout << "themes: " << hierarchy.theme_count()
                << ", stories: " << hierarchy.story_count()
                << ", clusters: " << hierarchy.cluster_count() << '\n';
    } else if (*summarize_cmd) {
      const PipelineConfig config = effective_config(global);
      const Corpus corpus = load_corpus_jsonl(resolve(global, sum_corpus));
      const Hierarchy hierarchy = load_hierarchy(resolve(global, sum_hierarchy));
      const ExtractiveSummarizer summarizer;
      const SummarySet summaries =
          summarize_hierarchy(corpus, hierarchy, config.budgets, summarizer);
      save_summaries(summaries, resolve(global, sum_out));
      std::cout << summaries.cluster.size() << " cluster, " << summaries.story.size()
                << " story, " << summaries.theme.size() << " theme summaries\n";
    } else if (*score_cmd) {
      const Corpus corpus = load_corpus_jsonl(resolve(global, score_corpus));
      const Hierarchy hierarchy = load_hierarchy(resolve(global, score_hierarchy));
      const auto assignments =
          load_assignments_csv(resolve(global, score_assignments));
      save_scores_csv(compute_all_snr(corpus, assignments, hierarchy),
                      resolve(global, score_out));
      std::cout << "scored " << corpus.size() << " reviews\n";
    } else if (*gate_cmd) {
      const auto assignments = load_assignments_csv(resolve(global, gate_assignments));
      const auto scores = load_scores_csv(resolve(global, gate_scores));
      const auto stats = gate_clusters(assignments, scores, gate_threshold);
      save_gate_csv(stats, resolve(global, gate_out));
      const auto outliers = flag_outliers(assignments, stats);
      save_outliers(outliers, resolve(global, gate_outliers));
      std::size_t retained = 0;
      for (const auto& s : stats) retained += s.retained;
      std::cout << retained << "/" << stats.size() << " clusters retained, "
                << outliers.size() << " outliers\n";
    } else if (*predict_cmd) {
      PipelineConfig config = effective_config(global);
      config.n_runs = pred_runs;
      config.backend_kind = pred_backend;
      const Corpus corpus = load_corpus_jsonl(resolve(global, pred_corpus));
      const Method method = method_from_name(pred_method);

      std::vector<Prompt> prompts;
      prompts.reserve(corpus.size());
      if (method == Method::Direct) {
        for (const auto& review : corpus.reviews) {
          prompts.push_back(build_prompt(review, Method::Direct));
        }
      } else {
        if (pred_assignments.empty() || pred_summaries.empty() ||
            pred_scores.empty()) {
          throw std::runtime_error(
              "--method ssas needs --assignments, --summaries and --scores");
        }
        const auto assignments =
            load_assignments_csv(resolve(global, pred_assignments));
        const SummarySet summaries = load_summaries(resolve(global, pred_summaries));
        const auto scores = load_scores_csv(resolve(global, pred_scores));
        std::map<std::string, const HierarchyAssignment*> by_id;
        for (const auto& a : assignments) by_id[a.review_id] = &a;
        std::map<std::string, double> signal;
        for (const auto& s : scores) signal[s.review_id] = s.total / 3.0;
        for (const auto& review : corpus.reviews) {
          auto it = by_id.find(review.id);
          if (it == by_id.end()) {
            throw std::runtime_error("no assignment for review " + review.id);
          }
          prompts.push_back(build_prompt(review, *it->second, summaries,
                                         signal.count(review.id)
                                             ? signal.at(review.id)
                                             : 0.0));
        }
      }

      std::unique_ptr<LlmBackend> backend;
      if (pred_backend == "mock") {
        backend = mock_backend(config.mock.seed, config.mock.base_noise);
      } else if (pred_backend == "http") {
        backend = http_backend(config.http);
      } else {
        throw std::runtime_error("unknown backend: " + pred_backend);
      }
      RunOptions options;
      options.n_runs = pred_runs;
      options.seed = config.run_seed;
      options.max_retries = config.http.max_retries;
      options.checkpoint_path = resolve(global, pred_out) + ".partial";
      const RunMatrix matrix = run_experiment(prompts, *backend, options);
      save_run_matrix_csv(matrix, resolve(global, pred_out));
      std::error_code ec;
      std::filesystem::remove(options.checkpoint_path, ec);
      std::cout << to_string(method) << ": " << matrix.review_ids.size() << " x "
                << matrix.n_runs << " grid\n";
    } else if (*evaluate_cmd) {
      const PipelineConfig config = effective_config(global);
      const Corpus corpus = load_corpus_jsonl(resolve(global, eval_corpus));
      const auto activity = load_activity_csv(resolve(global, eval_activity));
      const auto assignments =
          load_assignments_csv(resolve(global, eval_assignments));
      const auto outliers = load_outliers(resolve(global, eval_outliers));
      const RunMatrix direct =
          load_run_matrix_csv(resolve(global, eval_direct), Method::Direct);
      const RunMatrix ssas =
          load_run_matrix_csv(resolve(global, eval_ssas), Method::Ssas);

      const auto without_irrelevant = stage_filter(
          corpus, assignments, outliers, RefinementStage::WithoutIrrelevant);
      const auto without_both = stage_filter(
          corpus, assignments, outliers, RefinementStage::WithoutIrrelevantOutlier);

      std::vector<ScenarioInput> cells;
      for (const auto& scenario : config.scenarios) {
        const Corpus subset = segment(corpus, activity, scenario);
        ScenarioInput input;
        input.dataset = corpus.dataset_name;
        input.scenario = scenario;
        for (const auto& review : subset.reviews) {
          input.all_ids.insert(review.id);
          if (without_irrelevant.count(review.id))
            input.without_irrelevant.insert(review.id);
          if (without_both.count(review.id))
            input.without_irrelevant_outlier.insert(review.id);
        }
        cells.push_back(std::move(input));
      }
      save_report_json(build_report(direct, ssas, cells), resolve(global, eval_out));
      std::cout << cells.size() << " scenario cells evaluated\n";
    } else if (*report_cmd) {
      Report merged;
      for (const auto& input : report_inputs) {
        const Report part = load_report_json(resolve(global, input));
        merged.rows.insert(merged.rows.end(), part.rows.begin(), part.rows.end());
      }
      const std::string out = resolve(global, report_out);
      if (report_format == "json") {
        save_report_json(merged, out);
      } else if (report_format == "csv") {
        write_file(out, report_to_csv(merged));
      } else {
        throw std::runtime_error("unknown report format: " + report_format);
      }
      if (!report_chart.empty()) {
        write_file(resolve(global, report_chart), report_chart_data_csv(merged));
      }
      std::cout << "report with " << merged.rows.size() << " rows -> " << out << '\n';
    } else if (*run_cmd) {
      if (global.config_path.empty()) {
        throw std::runtime_error("run needs --config");
      }
      const PipelineConfig config = effective_config(global);
      const auto result = run_pipeline(config, run_workdir);
      for (const auto& stage : result.stages) {
        std::cout << (stage.skipped ? "skip " : "ran  ") << stage.name << '\n';
      }
      std::cout << "report: " << result.artifacts.at("report_json") << '\n';
    }
  } catch (const PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
