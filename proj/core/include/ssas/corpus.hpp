#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ssas {

struct Date {
  int year = 0;
  int month = 0;  // 1..12
  int day = 0;    // 1..31

  auto operator<=>(const Date&) const = default;
};

/// Accepts ISO dates/datetimes, MM/DD/YYYY, unix epoch seconds or
/// milliseconds, and ctime-style strings ("Wed Aug 30 07:12:09 -0700 2017").
std::optional<Date> parse_timestamp(std::string_view raw);

/// Year-quarter key, e.g. "2020-Q1".
std::string quarter_of(const Date& date);

/// Number of distinct year-quarter pairs intersecting [a, b].
int quarters_in_range(const Date& a, const Date& b);

struct Review {
  std::string id;
  std::string entity_id;
  std::string text;
  std::string timestamp;  // as ingested
  std::string quarter;    // empty until assign_quarters
};

struct Corpus {
  std::string dataset_name;
  std::vector<Review> reviews;
  // entity_id -> indices into reviews, insertion-independent (sorted keys)
  std::map<std::string, std::vector<std::size_t>> entity_index;

  void rebuild_index();
  const Review* find(const std::string& review_id) const;
  std::size_t size() const { return reviews.size(); }
};

enum class DatasetSchema { Generic, Amazon, Google, Goodreads };

DatasetSchema schema_from_name(std::string_view name);  // throws on unknown
std::string schema_name(DatasetSchema schema);

struct IngestStats {
  std::size_t total_lines = 0;
  std::size_t valid = 0;
  std::size_t malformed = 0;
  std::vector<std::string> sample_issues;  // first few, for the report
};

struct IngestResult {
  Corpus corpus;
  IngestStats stats;
};

/// Parse a JSONL or CSV review file into the canonical record shape.
/// Malformed lines are counted, never silently dropped from the stats.
/// Throws on unreadable files, duplicate review ids and zero valid records.
IngestResult ingest(const std::string& path, DatasetSchema schema,
                    const std::string& dataset_name = "");

/// Derive the quarter key for every review. Throws (naming the review id)
/// on the first unparseable timestamp.
void assign_quarters(Corpus& corpus);

/// Canonical interchange: one JSON object per line with
/// {id, entity_id, text, timestamp[, quarter]}.
void save_corpus_jsonl(const Corpus& corpus, const std::string& path);
Corpus load_corpus_jsonl(const std::string& path,
                         const std::string& dataset_name = "");

}  // namespace ssas
