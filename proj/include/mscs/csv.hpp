#pragma once

#include <string>
#include <vector>

namespace mscs::csv {

struct Table {
  std::vector<std::string> header;  // empty when the file has none
  std::vector<std::vector<double>> rows;
};

// Comma-separated numeric data. A first line with any non-numeric cell is
// taken as a header; non-numeric cells anywhere else are errors.
Table read_numeric(const std::string& path);
Table parse_numeric(const std::string& text, const std::string& origin = "<memory>");

// Shortest decimal text that round-trips at 17 significant digits.
std::string format_number(double value);

}  // namespace mscs::csv
