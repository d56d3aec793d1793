#include "ssas/inference.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ssas/csv.hpp"
#include "ssas/util.hpp"

namespace ssas {
namespace {

constexpr const char* kInstructions =
    "You are a sentiment classifier. Read the review and answer with exactly "
    "one word: positive, negative, or neutral.";

constexpr const char* kNoContext = "No classification context available.";

}  // namespace

std::string to_string(Method method) {
  return method == Method::Direct ? "direct" : "ssas";
}

Method method_from_name(const std::string& name) {
  const std::string lower = to_lower(name);
  if (lower == "direct") return Method::Direct;
  if (lower == "ssas") return Method::Ssas;
  throw std::invalid_argument("unknown method: " + name);
}

std::string to_string(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::Positive: return "positive";
    case SentimentLabel::Negative: return "negative";
    case SentimentLabel::Neutral: return "neutral";
  }
  return "neutral";
}

std::optional<SentimentLabel> try_parse_label(std::string_view text) {
  const std::string lower = to_lower(text);
  struct Needle {
    const char* word;
    SentimentLabel label;
  };
  static const Needle needles[] = {
      {"positive", SentimentLabel::Positive},
      {"negative", SentimentLabel::Negative},
      {"neutral", SentimentLabel::Neutral},
  };
  std::size_t best_pos = std::string::npos;
  std::optional<SentimentLabel> best;
  for (const auto& needle : needles) {
    const std::size_t pos = lower.find(needle.word);
    if (pos != std::string::npos && pos < best_pos) {
      best_pos = pos;
      best = needle.label;
    }
  }
  return best;
}

SentimentLabel parse_label(std::string_view text) {
  const auto label = try_parse_label(text);
  if (!label) {
    throw std::runtime_error("could not parse sentiment label from: \"" +
                             std::string(text.substr(0, 120)) + "\"");
  }
  return *label;
}

std::string Prompt::render() const {
  std::string out = instructions ? *instructions : kInstructions;
  out += "\n\n";
  if (context_block) {
    out += "Context:\n";
    out += *context_block;
    out += "\n\n";
  }
  out += "Review:\n";
  out += text;
  return out;
}

Prompt build_prompt(const Review& review, Method method) {
  if (method != Method::Direct) {
    throw std::invalid_argument("SSAS prompts need an assignment and summaries");
  }
  Prompt prompt;
  prompt.method = Method::Direct;
  prompt.review_id = review.id;
  prompt.text = review.text;
  return prompt;
}

Prompt build_prompt(const Review& review, const HierarchyAssignment& assignment,
                    const SummarySet& summaries, double context_signal) {
  Prompt prompt;
  prompt.method = Method::Ssas;
  prompt.review_id = review.id;
  prompt.text = review.text;
  prompt.context_signal = std::clamp(context_signal, 0.0, 1.0);

  std::string block;
  auto append = [&](const char* label, SummaryLevel level, int node_id) {
    if (node_id < 0) return;
    const ContextSummary* summary = summaries.find(level, node_id);
    if (!summary) {
      throw std::invalid_argument("missing " + to_string(level) + " summary " +
                                  std::to_string(node_id) + " for review " +
                                  review.id);
    }
    if (!block.empty()) block.push_back('\n');
    block += label;
    block += summary->text;
  };
  append("Theme: ", SummaryLevel::Theme, assignment.theme_id);
  append("Story: ", SummaryLevel::Story, assignment.story_id);
  append("Cluster: ", SummaryLevel::Cluster, assignment.cluster_id);
  if (block.empty()) block = kNoContext;
  prompt.context_block = std::move(block);
  return prompt;
}

MockBackend::MockBackend(std::uint64_t seed, double base_noise)
    : seed_(seed), base_noise_(base_noise) {
  if (base_noise < 0.0 || base_noise > 1.0) {
    throw std::invalid_argument("base_noise must be in [0, 1]");
  }
}

SentimentLabel MockBackend::latent_label(const std::string& review_id) const {
  const std::uint64_t h = derive_stream(seed_, review_id, 0xBA5E);
  return static_cast<SentimentLabel>(h % 3);
}

double MockBackend::flip_probability(const Prompt& prompt) const {
  const double signal =
      prompt.method == Method::Ssas ? std::clamp(prompt.context_signal, 0.0, 1.0)
                                    : 0.0;
  return base_noise_ * (1.0 - signal);
}

std::string MockBackend::complete(const Prompt& prompt, std::uint64_t call_nonce) {
  SentimentLabel label = latent_label(prompt.review_id);
  const double p = flip_probability(prompt);
  const std::uint64_t lane =
      (call_nonce << 1) | (prompt.method == Method::Ssas ? 1 : 0);
  const std::uint64_t stream = derive_stream(seed_, prompt.review_id, lane);
  if (unit_double(stream) < p) {
    const int shift = 1 + static_cast<int>(mix64(stream ^ 0xF11Bu) % 2);
    label = static_cast<SentimentLabel>((static_cast<int>(label) + shift) % 3);
  }
  return to_string(label);
}

std::unique_ptr<LlmBackend> mock_backend(std::uint64_t seed, double base_noise) {
  return std::make_unique<MockBackend>(seed, base_noise);
}

const std::vector<SentimentLabel>& RunMatrix::row(const std::string& review_id) const {
  for (std::size_t i = 0; i < review_ids.size(); ++i) {
    if (review_ids[i] == review_id) return labels[i];
  }
  throw std::out_of_range("run matrix has no row for review " + review_id);
}

RunMatrix run_experiment(const std::vector<Prompt>& prompts, LlmBackend& backend,
                         const RunOptions& options) {
  if (options.n_runs < 1) {
    throw std::invalid_argument("run_experiment: n_runs must be >= 1");
  }
  for (const auto& prompt : prompts) {
    if (prompt.method != prompts.front().method) {
      throw std::invalid_argument("run_experiment: mixed prompt methods");
    }
  }

  RunMatrix matrix;
  matrix.method = prompts.empty() ? Method::Direct : prompts.front().method;
  matrix.n_runs = options.n_runs;
  matrix.review_ids.reserve(prompts.size());
  for (const auto& prompt : prompts) matrix.review_ids.push_back(prompt.review_id);
  matrix.labels.assign(prompts.size(),
                       std::vector<SentimentLabel>(options.n_runs,
                                                   SentimentLabel::Neutral));

  // Resume rows finished before a previous abort.
  std::unordered_set<std::string> done;
  if (!options.checkpoint_path.empty() && file_exists(options.checkpoint_path)) {
    const RunMatrix partial =
        load_run_matrix_csv(options.checkpoint_path, matrix.method);
    if (partial.n_runs == options.n_runs) {
      std::unordered_map<std::string, std::size_t> index;
      for (std::size_t i = 0; i < matrix.review_ids.size(); ++i) {
        index[matrix.review_ids[i]] = i;
      }
      for (std::size_t i = 0; i < partial.review_ids.size(); ++i) {
        auto it = index.find(partial.review_ids[i]);
        if (it == index.end()) continue;
        matrix.labels[it->second] = partial.labels[i];
        done.insert(partial.review_ids[i]);
      }
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    if (!done.count(prompts[i].review_id)) pending.push_back(i);
  }

  std::atomic<bool> failed{false};
  std::mutex failure_mutex;
  std::string failure_message;
  std::vector<char> completed(prompts.size(), 0);
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    if (done.count(prompts[i].review_id)) completed[i] = 1;
  }

  parallel_for(
      pending.size(),
      [&](std::size_t k) {
        if (failed.load()) return;
        const std::size_t i = pending[k];
        const Prompt& prompt = prompts[i];
        try {
          for (int run = 0; run < options.n_runs; ++run) {
            std::optional<SentimentLabel> label;
            std::string last_error;
            for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
              const std::uint64_t nonce =
                  static_cast<std::uint64_t>(run) +
                  (static_cast<std::uint64_t>(attempt) << 32);
              try {
                label = try_parse_label(backend.complete(prompt, nonce));
              } catch (const std::exception& e) {
                last_error = e.what();
              }
              if (label) break;
            }
            if (!label) {
              throw std::runtime_error(
                  "cell failed after retries (review " + prompt.review_id +
                  ", run " + std::to_string(run) +
                  (last_error.empty() ? ")" : "): " + last_error));
            }
            matrix.labels[i][run] = *label;
          }
          completed[i] = 1;
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failed.exchange(true)) failure_message = e.what();
        }
      },
      options.max_in_flight);

  if (failed.load()) {
    if (!options.checkpoint_path.empty()) {
      RunMatrix partial;
      partial.method = matrix.method;
      partial.n_runs = matrix.n_runs;
      for (std::size_t i = 0; i < prompts.size(); ++i) {
        if (!completed[i]) continue;
        partial.review_ids.push_back(matrix.review_ids[i]);
        partial.labels.push_back(matrix.labels[i]);
      }
      save_run_matrix_csv(partial, options.checkpoint_path);
    }
    throw std::runtime_error("run_experiment aborted: " + failure_message);
  }
  return matrix;
}

void save_run_matrix_csv(const RunMatrix& matrix, const std::string& path) {
  std::vector<std::string> header = {"review_id"};
  for (int run = 0; run < matrix.n_runs; ++run) {
    header.push_back("run_" + std::to_string(run));
  }
  CsvWriter writer(std::move(header));
  for (std::size_t i = 0; i < matrix.review_ids.size(); ++i) {
    std::vector<std::string> row = {matrix.review_ids[i]};
    for (const auto label : matrix.labels[i]) row.push_back(to_string(label));
    writer.add_row(std::move(row));
  }
  writer.save(path);
}

std::string LlmSummarizer::summarize(const std::vector<SourceText>& sources,
                                     const FeatureVector& keyword_profile,
                                     int token_budget,
                                     bool cover_all_sources) const {
  if (sources.empty()) {
    throw std::invalid_argument("summarize: no source texts");
  }
  (void)cover_all_sources;
  std::string joined;
  for (const auto& source : sources) {
    joined += "- ";
    joined += source.text;
    joined += '\n';
  }
  std::string keywords;
  for (const auto& [term, w] : keyword_profile.terms()) {
    if (!keywords.empty()) keywords += ", ";
    keywords += term;
  }
  Prompt prompt;
  prompt.review_id = "summary";
  prompt.instructions =
      "Summarize the following notes in at most " + std::to_string(token_budget) +
      " words. Keep statements of opinion and sentiment. Prioritize these "
      "keywords: " + keywords + ".";
  prompt.text = joined;
  std::string reply = backend_.complete(prompt, 0);

  // Enforce the budget regardless of how verbose the model was.
  std::istringstream in(reply);
  std::string token, out;
  int taken = 0;
  while (taken < token_budget && in >> token) {
    if (taken) out.push_back(' ');
    out += token;
    ++taken;
  }
  return out;
}

RunMatrix load_run_matrix_csv(const std::string& path, Method method) {
  const CsvTable table = read_csv(path);
  if (table.header.empty() || table.header[0] != "review_id") {
    throw std::runtime_error("not a run matrix file: " + path);
  }
  RunMatrix matrix;
  matrix.method = method;
  matrix.n_runs = static_cast<int>(table.header.size()) - 1;
  for (const auto& row : table.rows) {
    if (static_cast<int>(row.size()) != matrix.n_runs + 1) {
      throw std::runtime_error("ragged run matrix row in " + path);
    }
    matrix.review_ids.push_back(row[0]);
    std::vector<SentimentLabel> labels;
    labels.reserve(matrix.n_runs);
    for (int run = 0; run < matrix.n_runs; ++run) {
      labels.push_back(parse_label(row[run + 1]));
    }
    matrix.labels.push_back(std::move(labels));
  }
  return matrix;
}

}  // namespace ssas
