#include "biteweight/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <system_error>

#include "biteweight/error.hpp"

namespace biteweight::csv {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error(ErrorCode::InvalidParams, "cannot format number");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view field, std::size_t line) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ": not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

Table read_table(const std::filesystem::path& path, std::string_view expected_header) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());

    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    const auto expected = split(expected_header);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        auto fields = split(line);
        if (!have_header) {
            if (fields.size() != expected.size()) {
                throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(line_no) +
                                                       ": expected header '" + std::string(expected_header) + "'");
            }
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] != expected[i]) {
                    throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(line_no) +
                                                           ": expected header '" +
                                                           std::string(expected_header) + "'");
                }
                table.header.emplace_back(fields[i]);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != expected.size()) {
            throw Error(ErrorCode::ParseError, path.string() + " line " + std::to_string(line_no) + ": expected " +
                                                   std::to_string(expected.size()) + " fields, got " +
                                                   std::to_string(fields.size()));
        }
        table.rows.emplace_back(fields.begin(), fields.end());
        table.line_numbers.push_back(line_no);
    }
    if (!have_header) throw Error(ErrorCode::ParseError, path.string() + ": missing header");
    return table;
}

}  // namespace biteweight::csv
