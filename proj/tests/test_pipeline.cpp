#include <doctest.h>

#include <filesystem>

#include "ssas/pipeline.hpp"
#include "ssas/util.hpp"
#include "support/synthetic.hpp"

using namespace ssas;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

PipelineConfig test_config(const std::string& input_path) {
  PipelineConfig config;
  config.dataset_name = "synthetic";
  config.schema = "generic";
  config.input_path = input_path;
  config.hierarchy.theme_threshold = 0.05;
  config.hierarchy.story_threshold = 0.2;
  config.hierarchy.cluster_threshold = 0.45;
  config.n_runs = 6;
  config.run_seed = 5;
  config.mock.seed = 5;
  config.mock.base_noise = 0.3;
  return config;
}

bool all_skipped(const PipelineResult& result) {
  for (const auto& stage : result.stages) {
    if (!stage.skipped) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("pipeline produces every artifact and resumes cleanly") {
  TempDir dir("ssas_pipeline_test");
  const Corpus corpus = synthetic::make_corpus(77, 200, 8, 0.15);
  const std::string input = (dir.path / "input.jsonl").string();
  save_corpus_jsonl(corpus, input);
  const PipelineConfig config = test_config(input);

  const std::string workdir = (dir.path / "work").string();
  const PipelineResult first = run_pipeline(config, workdir);
  CHECK(first.stages.size() == 10);
  for (const auto& [name, path] : first.artifacts) {
    CAPTURE(name);
    CHECK(file_exists(path));
  }

  SUBCASE("rerun with unchanged inputs skips every stage") {
    const PipelineResult second = run_pipeline(config, workdir);
    CHECK(all_skipped(second));
  }

  SUBCASE("changing the gate threshold reruns gate and its dependents only") {
    PipelineConfig tightened = config;
    tightened.gate_threshold = 99.5;  // prunes all but the dominant clusters
    const PipelineResult second = run_pipeline(tightened, workdir);
    std::map<std::string, bool> skipped;
    for (const auto& stage : second.stages) skipped[stage.name] = stage.skipped;
    CHECK(skipped.at("ingest"));
    CHECK(skipped.at("characterize"));
    CHECK(skipped.at("classify"));
    CHECK(skipped.at("summarize"));
    CHECK(skipped.at("score"));
    CHECK(!skipped.at("gate"));
    CHECK(skipped.at("predict_direct"));   // does not consume gate outputs
    CHECK(skipped.at("predict_ssas"));
    CHECK(!skipped.at("evaluate"));        // outliers.csv changed
    CHECK(!skipped.at("report"));
  }

  SUBCASE("deleting one artifact reproduces it byte-identically") {
    const std::string gate_path = first.artifacts.at("gate");
    const std::string before = read_file(gate_path);
    fs::remove(gate_path);
    const PipelineResult second = run_pipeline(config, workdir);
    CHECK(read_file(gate_path) == before);
    std::map<std::string, bool> skipped;
    for (const auto& stage : second.stages) skipped[stage.name] = stage.skipped;
    CHECK(!skipped.at("gate"));
    CHECK(skipped.at("classify"));
  }
}

TEST_CASE("two clean runs are byte-identical with the mock backend") {
  TempDir dir("ssas_pipeline_det");
  const Corpus corpus = synthetic::make_corpus(123, 150, 6, 0.1);
  const std::string input = (dir.path / "input.jsonl").string();
  save_corpus_jsonl(corpus, input);
  const PipelineConfig config = test_config(input);

  const std::string work_a = (dir.path / "a").string();
  const std::string work_b = (dir.path / "b").string();
  const PipelineResult ra = run_pipeline(config, work_a);
  const PipelineResult rb = run_pipeline(config, work_b);

  for (const char* artifact : {"hierarchy", "summaries", "runs_direct",
                               "runs_ssas", "report_json", "report_csv"}) {
    CAPTURE(artifact);
    CHECK(read_file(ra.artifacts.at(artifact)) ==
          read_file(rb.artifacts.at(artifact)));
  }
}

TEST_CASE("pipeline failures name the failing stage") {
  TempDir dir("ssas_pipeline_fail");
  PipelineConfig config = test_config((dir.path / "missing.jsonl").string());
  try {
    run_pipeline(config, (dir.path / "work").string());
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.stage == "ingest");
  }
}

TEST_CASE("config json round trip keeps the experiment reproducible") {
  PipelineConfig config = test_config("/data/reviews.jsonl");
  config.scenarios = {{VolumeFilter::High, DistributionFilter::Sparse0To50}};
  config.gate_threshold = 0.25;
  const PipelineConfig loaded =
      pipeline_config_from_json(pipeline_config_to_json(config));
  CHECK(loaded.input_path == config.input_path);
  CHECK(loaded.gate_threshold == doctest::Approx(0.25));
  CHECK(loaded.n_runs == config.n_runs);
  CHECK(loaded.hierarchy.theme_threshold ==
        doctest::Approx(config.hierarchy.theme_threshold));
  REQUIRE(loaded.scenarios.size() == 1);
  CHECK(loaded.scenarios[0] ==
        ScenarioFilter{VolumeFilter::High, DistributionFilter::Sparse0To50});
}

TEST_CASE("default config carries the published experiment constants") {
  const PipelineConfig config;
  CHECK(config.n_runs == 10);
  CHECK(config.gate_threshold == doctest::Approx(0.1));
  CHECK(config.scenarios.size() == 7);  // base + six robustness scenarios
  CHECK(config.scenarios.front().is_base());
}
