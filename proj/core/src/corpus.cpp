#include "ssas/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ssas/csv.hpp"
#include "ssas/util.hpp"

namespace ssas {
namespace {

using nlohmann::json;

bool valid_date(int year, int month, int day) {
  if (year < 1 || month < 1 || month > 12 || day < 1) return false;
  static const int days_in_month[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = days_in_month[month - 1];
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

std::optional<Date> from_epoch(long long value) {
  // Heuristic: values past year ~5000 in seconds are milliseconds.
  if (value > 100000000000LL) value /= 1000;
  std::time_t t = static_cast<std::time_t>(value);
  std::tm tm{};
  if (gmtime_r(&t, &tm) == nullptr) return std::nullopt;
  return Date{tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday};
}

int month_from_name(std::string_view name) {
  static const char* names[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                "jul", "aug", "sep", "oct", "nov", "dec"};
  std::string lower = to_lower(name.substr(0, 3));
  for (int i = 0; i < 12; ++i) {
    if (lower == names[i]) return i + 1;
  }
  return 0;
}

struct FieldMapping {
  std::string id;         // empty -> composed from entity + user + timestamp
  std::string user;       // only used when composing ids
  std::string entity;
  std::string text;
  std::string timestamp;
};

FieldMapping mapping_for(DatasetSchema schema) {
  switch (schema) {
    case DatasetSchema::Generic:
      return {"id", "", "entity_id", "text", "timestamp"};
    case DatasetSchema::Amazon:
      return {"", "user_id", "asin", "text", "timestamp"};
    case DatasetSchema::Google:
      return {"", "user_id", "gmap_id", "text", "time"};
    case DatasetSchema::Goodreads:
      return {"review_id", "", "book_id", "review_text", "date_added"};
  }
  throw std::logic_error("unhandled schema");
}

std::string json_field_as_string(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return "";
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (it->is_number_unsigned()) return std::to_string(it->get<unsigned long long>());
  if (it->is_number_float()) return format_double(it->get<double>());
  return it->dump();
}

struct RawRecord {
  std::string id, entity, text, timestamp;
  std::string issue;  // nonempty when the record is malformed
};

RawRecord map_record(const FieldMapping& mapping,
                     const std::function<std::string(const std::string&)>& get) {
  RawRecord rec;
  rec.entity = trim(get(mapping.entity));
  rec.text = trim(get(mapping.text));
  rec.timestamp = trim(get(mapping.timestamp));
  if (!mapping.id.empty()) {
    rec.id = trim(get(mapping.id));
  } else {
    const std::string user = trim(get(mapping.user));
    if (!user.empty() && !rec.entity.empty() && !rec.timestamp.empty()) {
      rec.id = user + ":" + rec.entity + ":" + rec.timestamp;
    }
  }
  if (rec.id.empty()) rec.issue = "missing id";
  else if (rec.entity.empty()) rec.issue = "missing entity id";
  else if (rec.text.empty()) rec.issue = "empty text";
  else if (rec.timestamp.empty()) rec.issue = "missing timestamp";
  return rec;
}

void note_issue(IngestStats& stats, std::size_t line_no, const std::string& what) {
  ++stats.malformed;
  if (stats.sample_issues.size() < 10) {
    stats.sample_issues.push_back("line " + std::to_string(line_no) + ": " + what);
  }
}

}  // namespace

std::optional<Date> parse_timestamp(std::string_view raw) {
  std::string s = trim(raw);
  if (s.empty()) return std::nullopt;

  // ISO date or datetime: YYYY-MM-DD[*]
  if (s.size() >= 10 && s[4] == '-' && s[7] == '-') {
    int y = 0, m = 0, d = 0;
    auto all_digits = [](std::string_view v) {
      return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) {
        return std::isdigit(c);
      });
    };
    if (all_digits(s.substr(0, 4)) && all_digits(s.substr(5, 2)) &&
        all_digits(s.substr(8, 2))) {
      y = std::stoi(s.substr(0, 4));
      m = std::stoi(s.substr(5, 2));
      d = std::stoi(s.substr(8, 2));
      if (valid_date(y, m, d)) return Date{y, m, d};
      return std::nullopt;
    }
  }

  // MM/DD/YYYY
  if (std::count(s.begin(), s.end(), '/') == 2) {
    int m = 0, d = 0, y = 0;
    if (std::sscanf(s.c_str(), "%d/%d/%d", &m, &d, &y) == 3 && valid_date(y, m, d)) {
      return Date{y, m, d};
    }
    return std::nullopt;
  }

  // ctime-style: "Wed Aug 30 07:12:09 -0700 2017"
  if (s.size() > 4 && std::isalpha(static_cast<unsigned char>(s[0]))) {
    std::istringstream in(s);
    std::string dow, mon;
    int day = 0;
    in >> dow >> mon >> day;
    if (in) {
      const int month = month_from_name(mon);
      std::string token, last;
      while (in >> token) last = token;
      int year = 0;
      auto [p, ec] = std::from_chars(last.data(), last.data() + last.size(), year);
      if (month > 0 && ec == std::errc() && valid_date(year, month, day)) {
        return Date{year, month, day};
      }
    }
    return std::nullopt;
  }

  // epoch seconds or milliseconds
  {
    long long value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc() && p == s.data() + s.size()) return from_epoch(value);
  }
  return std::nullopt;
}

std::string quarter_of(const Date& date) {
  const int quarter = (date.month - 1) / 3 + 1;
  return std::to_string(date.year) + "-Q" + std::to_string(quarter);
}

int quarters_in_range(const Date& a, const Date& b) {
  const Date& lo = a <= b ? a : b;
  const Date& hi = a <= b ? b : a;
  const int lo_index = lo.year * 4 + (lo.month - 1) / 3;
  const int hi_index = hi.year * 4 + (hi.month - 1) / 3;
  return hi_index - lo_index + 1;
}

void Corpus::rebuild_index() {
  entity_index.clear();
  for (std::size_t i = 0; i < reviews.size(); ++i) {
    entity_index[reviews[i].entity_id].push_back(i);
  }
}

const Review* Corpus::find(const std::string& review_id) const {
  for (const auto& r : reviews) {
    if (r.id == review_id) return &r;
  }
  return nullptr;
}

DatasetSchema schema_from_name(std::string_view name) {
  const std::string lower = to_lower(name);
  if (lower == "generic") return DatasetSchema::Generic;
  if (lower == "amazon") return DatasetSchema::Amazon;
  if (lower == "google") return DatasetSchema::Google;
  if (lower == "goodreads") return DatasetSchema::Goodreads;
  throw std::invalid_argument("unknown dataset schema: " + std::string(name));
}

std::string schema_name(DatasetSchema schema) {
  switch (schema) {
    case DatasetSchema::Generic: return "generic";
    case DatasetSchema::Amazon: return "amazon";
    case DatasetSchema::Google: return "google";
    case DatasetSchema::Goodreads: return "goodreads";
  }
  return "generic";
}

IngestResult ingest(const std::string& path, DatasetSchema schema,
                    const std::string& dataset_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file: " + path);

  IngestResult result;
  result.corpus.dataset_name =
      dataset_name.empty() ? std::filesystem::path(path).stem().string()
                           : dataset_name;

  const FieldMapping mapping = mapping_for(schema);
  std::set<std::string> seen_ids;

  auto add_record = [&](const RawRecord& rec, std::size_t line_no) {
    if (!rec.issue.empty()) {
      note_issue(result.stats, line_no, rec.issue);
      return;
    }
    if (!seen_ids.insert(rec.id).second) {
      throw std::runtime_error("duplicate review id '" + rec.id + "' at line " +
                               std::to_string(line_no));
    }
    result.corpus.reviews.push_back(
        Review{rec.id, rec.entity, rec.text, rec.timestamp, ""});
    ++result.stats.valid;
  };

  const bool csv_mode =
      to_lower(std::filesystem::path(path).extension().string()) == ".csv";

  if (csv_mode) {
    CsvTable table = read_csv(path);
    auto col = [&](const std::string& name) { return table.column(name); };
    const int id_col = mapping.id.empty() ? -1 : col(mapping.id);
    const int user_col = mapping.user.empty() ? -1 : col(mapping.user);
    const int entity_col = col(mapping.entity);
    const int text_col = col(mapping.text);
    const int ts_col = col(mapping.timestamp);
    if (entity_col < 0 || text_col < 0 || ts_col < 0 ||
        (mapping.id.empty() ? user_col < 0 : id_col < 0)) {
      throw std::runtime_error("csv header is missing required columns for schema " +
                               schema_name(schema));
    }
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      ++result.stats.total_lines;
      const auto& row = table.rows[r];
      auto cell = [&](int c) -> std::string {
        return (c >= 0 && c < static_cast<int>(row.size())) ? row[c] : "";
      };
      auto get = [&](const std::string& name) -> std::string {
        if (name == mapping.id) return cell(id_col);
        if (name == mapping.user) return cell(user_col);
        if (name == mapping.entity) return cell(entity_col);
        if (name == mapping.text) return cell(text_col);
        if (name == mapping.timestamp) return cell(ts_col);
        return "";
      };
      add_record(map_record(mapping, get), r + 2);  // +2: header is line 1
    }
  } else {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      ++result.stats.total_lines;
      json obj = json::parse(line, nullptr, false);
      if (obj.is_discarded() || !obj.is_object()) {
        note_issue(result.stats, line_no, "invalid json");
        continue;
      }
      auto get = [&](const std::string& name) {
        return json_field_as_string(obj, name);
      };
      add_record(map_record(mapping, get), line_no);
    }
  }

  if (result.stats.valid == 0) {
    throw std::runtime_error("no valid records in " + path + " (" +
                             std::to_string(result.stats.malformed) +
                             " malformed lines)");
  }
  result.corpus.rebuild_index();
  return result;
}

void assign_quarters(Corpus& corpus) {
  for (auto& review : corpus.reviews) {
    const auto date = parse_timestamp(review.timestamp);
    if (!date) {
      throw std::runtime_error("unparseable timestamp '" + review.timestamp +
                               "' for review " + review.id);
    }
    review.quarter = quarter_of(*date);
  }
}

void save_corpus_jsonl(const Corpus& corpus, const std::string& path) {
  std::ostringstream out;
  for (const auto& r : corpus.reviews) {
    json obj;
    obj["id"] = r.id;
    obj["entity_id"] = r.entity_id;
    obj["text"] = r.text;
    obj["timestamp"] = r.timestamp;
    if (!r.quarter.empty()) obj["quarter"] = r.quarter;
    out << obj.dump() << '\n';
  }
  write_file(path, out.str());
}

Corpus load_corpus_jsonl(const std::string& path, const std::string& dataset_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  Corpus corpus;
  corpus.dataset_name = dataset_name.empty()
                            ? std::filesystem::path(path).stem().string()
                            : dataset_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw std::runtime_error("corrupt corpus line " + std::to_string(line_no) +
                               " in " + path);
    }
    Review r;
    r.id = obj.value("id", "");
    r.entity_id = obj.value("entity_id", "");
    r.text = obj.value("text", "");
    r.timestamp = json_field_as_string(obj, "timestamp");
    r.quarter = obj.value("quarter", "");
    if (r.id.empty() || r.entity_id.empty()) {
      throw std::runtime_error("corpus record missing id/entity at line " +
                               std::to_string(line_no));
    }
    corpus.reviews.push_back(std::move(r));
  }
  corpus.rebuild_index();
  return corpus;
}

}  // namespace ssas
