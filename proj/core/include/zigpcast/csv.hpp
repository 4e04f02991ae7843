#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zigpcast::csv {

struct Row {
  int line = 0;  // 1-based line in the source
  std::vector<std::string> fields;
};

// Comma-separated text with a mandatory header row. Blank lines and lines
// starting with '#' are skipped. Fields may be double-quoted.
class Table {
 public:
  static Table parse(std::string_view text, std::string source);
  static Table read(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<Row>& rows() const { return rows_; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  // Throws ConfigError naming the source if absent.
  std::size_t column(std::string_view name) const;

  // "<source>:<line>: <message>"
  std::string where(const Row& row) const;

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<Row> rows_;
};

std::vector<std::string> split_line(std::string_view line);

// Quotes a field if it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace zigpcast::csv
