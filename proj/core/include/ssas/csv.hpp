#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssas {

/// Minimal RFC-4180-ish CSV support for the project's flat artifacts.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& content);

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);
  std::string str() const;
  void save(const std::string& path) const;

 private:
  CsvTable table_;
};

}  // namespace ssas
