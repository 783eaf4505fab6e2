#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace skillrank {

// Key order in written records follows insertion order, which keeps every
// output file byte-stable across runs.
using Json = nlohmann::ordered_json;

// Shortest decimal that parses back to the same double.
std::string format_real(double value);

std::vector<std::string> read_lines(std::istream& in);
std::vector<std::string> read_lines(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, std::string_view content);

// Parses one line of a line-delimited file; errors carry `where` and the
// 1-based line number.
Json parse_json_line(std::string_view line, std::string_view where, std::size_t line_no);

bool is_blank(std::string_view line);

}  // namespace skillrank
