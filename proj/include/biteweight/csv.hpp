#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace biteweight::csv {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole field; throws ParseError tagged with `line`.
double parse_double(std::string_view field, std::size_t line);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
};

/// Reads a comma-separated file whose first line must equal `expected_header`.
/// Blank lines and lines starting with '#' are skipped.
Table read_table(const std::filesystem::path& path, std::string_view expected_header);

}  // namespace biteweight::csv
