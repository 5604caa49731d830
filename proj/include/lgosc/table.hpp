#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lgosc {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

/// Plot-ready output: a header of resolved settings, named columns, rows, and
/// an optional summary of derived quantities.
struct Table {
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;

  void add_row(std::vector<Cell> row);
};

enum class Format { csv, json };

Format format_from_string(const std::string& name);

/// 17 significant digits, so values round-trip exactly.
std::string format_double(double x);

/// CSV: header and summary as "# key=value" comment lines, then the column
/// header and rows. JSON: {"config": {...}, "summary": {...}, "records": [...]}.
void write_table(std::ostream& out, const Table& table, Format format);

}  // namespace lgosc
