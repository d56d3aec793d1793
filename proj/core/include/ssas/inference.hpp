#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ssas/context.hpp"
#include "ssas/corpus.hpp"
#include "ssas/hierarchy.hpp"

namespace ssas {

enum class Method { Direct, Ssas };
std::string to_string(Method method);
Method method_from_name(const std::string& name);

enum class SentimentLabel { Positive, Negative, Neutral };
std::string to_string(SentimentLabel label);

/// Case-insensitive earliest occurrence of positive/negative/neutral.
std::optional<SentimentLabel> try_parse_label(std::string_view text);
SentimentLabel parse_label(std::string_view text);  // throws on no match

struct Prompt {
  Method method = Method::Direct;
  std::string review_id;
  std::string text;                          // review text, verbatim
  std::optional<std::string> context_block;  // present iff method == Ssas
  double context_signal = 0.0;               // [0,1]; 0 for DIRECT prompts
  std::optional<std::string> instructions;   // task override (summarization)

  /// Final string sent to the model. The review text appears byte-for-byte
  /// in both methods; only the context differs.
  std::string render() const;
};

/// DIRECT: plain sentiment prompt around the raw review text.
Prompt build_prompt(const Review& review, Method method);

/// SSAS: same instructions plus the cluster/story/theme summaries of the
/// review's assigned nodes. Throws when an assigned node lacks a summary;
/// a fully unclassified review gets a fixed no-context line.
Prompt build_prompt(const Review& review, const HierarchyAssignment& assignment,
                    const SummarySet& summaries, double context_signal);

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  /// `call_nonce` keys deterministic backends per grid cell (run index);
  /// network backends ignore it.
  virtual std::string complete(const Prompt& prompt, std::uint64_t call_nonce) = 0;
  virtual std::string name() const = 0;
};

/// Simulation backend for desk-scale experiments. Every review id hashes to
/// a fixed latent label; each call flips it away with probability
/// base_noise * (1 - context_signal), seeded by (seed, id, method, nonce).
class MockBackend : public LlmBackend {
 public:
  MockBackend(std::uint64_t seed, double base_noise);
  std::string complete(const Prompt& prompt, std::uint64_t call_nonce) override;
  std::string name() const override { return "mock"; }

  SentimentLabel latent_label(const std::string& review_id) const;
  double flip_probability(const Prompt& prompt) const;

 private:
  std::uint64_t seed_;
  double base_noise_;
};

std::unique_ptr<LlmBackend> mock_backend(std::uint64_t seed, double base_noise);

struct BackendConfig {
  std::string endpoint;      // e.g. https://host/v1/chat/completions
  std::string model;
  std::optional<double> temperature;  // passed through verbatim when set
  int timeout_ms = 30000;
  int max_retries = 3;
  std::string api_key_env = "SSAS_API_KEY";
  std::string response_path = "choices.0.message.content";
  double requests_per_second = 0.0;  // 0 = unlimited
};

/// Generic JSON-over-HTTP chat-completion client. POSTs
/// {model, messages, temperature} and extracts the reply text at
/// `response_path`; retries transport failures with exponential backoff.
std::unique_ptr<LlmBackend> http_backend(const BackendConfig& config);

/// Summarizer backed by an LLM client; the reply is truncated to the token
/// budget. The extractive default stays the deterministic test path.
class LlmSummarizer : public Summarizer {
 public:
  explicit LlmSummarizer(LlmBackend& backend) : backend_(backend) {}
  std::string summarize(const std::vector<SourceText>& sources,
                        const FeatureVector& keyword_profile, int token_budget,
                        bool cover_all_sources) const override;

 private:
  LlmBackend& backend_;
};

struct RunMatrix {
  Method method = Method::Direct;
  std::vector<std::string> review_ids;
  std::vector<std::vector<SentimentLabel>> labels;  // [review][run]
  int n_runs = 0;

  const std::vector<SentimentLabel>& row(const std::string& review_id) const;
};

struct RunOptions {
  int n_runs = 10;
  std::uint64_t seed = 0;          // recorded in run metadata
  int max_retries = 3;             // label-parse retries per cell
  unsigned max_in_flight = 0;      // 0 = hardware concurrency
  std::string checkpoint_path;     // completed rows, written on abort
};

/// Fill the |prompts| x n_runs grid. Every cell is retried up to
/// max_retries times; an exhausted cell aborts the run after writing the
/// checkpoint (when a path is configured), from which a rerun resumes.
RunMatrix run_experiment(const std::vector<Prompt>& prompts, LlmBackend& backend,
                         const RunOptions& options);

void save_run_matrix_csv(const RunMatrix& matrix, const std::string& path);
RunMatrix load_run_matrix_csv(const std::string& path, Method method);

}  // namespace ssas
