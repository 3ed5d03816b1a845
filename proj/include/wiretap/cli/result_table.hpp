#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wiretap::cli {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

/// Rows of typed cells with '#'-prefixed metadata, written as CSV.
class ResultTable {
 public:
  explicit ResultTable(std::vector<std::string> columns);

  void add_row(std::vector<Cell> row);
  void set_meta(const std::string& key, const std::string& value);

  [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }
  [[nodiscard]] std::size_t column_index(const std::string& name) const;

  void write_csv(std::ostream& os) const;
  [[nodiscard]] std::string to_csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

/// Shortest round-trip-safe text at 12 significant digits.
std::string format_double(double v);
std::string format_cell(const Cell& c);

/// Parsed CSV: metadata lines, header and raw string cells.
struct CsvDocument {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column_index(const std::string& name) const;
};

CsvDocument read_csv(std::istream& is);

}  // namespace wiretap::cli
