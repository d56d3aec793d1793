#include "ssas/csv.hpp"

#include <sstream>
#include <stdexcept>

#include "ssas/util.hpp"

namespace ssas {
namespace {

std::vector<std::string> parse_line(const std::string& content, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  while (pos < content.size()) {
    char c = content[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < content.size() && content[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && pos + 1 < content.size() && content[pos + 1] == '\n') ++pos;
      ++pos;
      fields.push_back(std::move(field));
      return fields;
    } else {
      field.push_back(c);
    }
    ++pos;
  }
  fields.push_back(std::move(field));
  return fields;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable parse_csv(const std::string& content) {
  CsvTable table;
  std::size_t pos = 0;
  bool first = true;
  while (pos < content.size()) {
    auto fields = parse_line(content, pos);
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line.push_back(',');
    line += csv_escape(fields[i]);
  }
  return line;
}

CsvWriter::CsvWriter(std::vector<std::string> header) {
  table_.header = std::move(header);
}

void CsvWriter::add_row(std::vector<std::string> row) {
  if (row.size() != table_.header.size()) {
    throw std::invalid_argument("csv row width does not match header");
  }
  table_.rows.push_back(std::move(row));
}

std::string CsvWriter::str() const {
  std::ostringstream out;
  out << csv_join(table_.header) << '\n';
  for (const auto& row : table_.rows) out << csv_join(row) << '\n';
  return out.str();
}

void CsvWriter::save(const std::string& path) const { write_file(path, str()); }

}  // namespace ssas
