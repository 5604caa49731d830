#include "lgosc/table.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "lgosc/params.hpp"

namespace lgosc {

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw DomainError("row width does not match columns");
  rows.push_back(std::move(row));
}

Format format_from_string(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw DomainError("unknown output format '" + name + "'");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const {
      if (x.find_first_of(",\"\n") == std::string::npos) return x;
      std::string quoted = "\"";
      for (char c : x) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + '"';
    }
  };
  return std::visit(Visitor{}, cell);
}

std::string json_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(double x) const { return std::isfinite(x) ? format_double(x) : "null"; }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return nlohmann::json(x).dump(); }
  };
  return std::visit(Visitor{}, cell);
}

std::string json_key(const std::string& key) { return nlohmann::json(key).dump(); }

}  // namespace

void write_table(std::ostream& out, const Table& table, Format format) {
  if (format == Format::csv) {
    for (const auto& [key, value] : table.header) out << "# " << key << '=' << value << '\n';
    for (const auto& [key, value] : table.summary) out << "# " << key << '=' << csv_cell(value) << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
      out << '\n';
    }
    return;
  }

  out << "{\n  \"config\": {";
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    out << (k ? ", " : "") << json_key(table.header[k].first) << ": "
        << json_key(table.header[k].second);
  }
  out << "},\n  \"summary\": {";
  for (std::size_t k = 0; k < table.summary.size(); ++k) {
    out << (k ? ", " : "") << json_key(table.summary[k].first) << ": "
        << json_cell(table.summary[k].second);
  }
  out << "},\n  \"records\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << (r ? ",\n    {" : "\n    {");
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? ", " : "") << json_key(table.columns[c]) << ": " << json_cell(table.rows[r][c]);
    }
    out << '}';
  }
  out << (table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

}  // namespace lgosc
