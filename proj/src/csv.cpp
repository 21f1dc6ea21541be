#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mscs/csv.hpp"
#include "mscs/error.hpp"

namespace mscs::csv {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_cell(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  char* end = nullptr;
  out = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size();
}

}  // namespace

Table parse_numeric(const std::string& text, const std::string& origin) {
  Table table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cells = split(trimmed);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (const auto& cell : cells) {
      double v = 0.0;
      if (!parse_cell(cell, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (first) {
        table.header = cells;
        first = false;
        continue;
      }
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": non-numeric cell");
    }
    first = false;
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw ConfigError(origin + ": no numeric data");
  return table;
}

Table read_numeric(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot open " + path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return parse_numeric(buffer.str(), path);
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace mscs::csv
