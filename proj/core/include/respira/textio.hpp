#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace respira::textio {

// Shortest representation that parses back to the identical double.
std::string fmt(double value);

// Strict parsers: the whole token must be consumed, the result finite
// unless allow_nonfinite is set. Throw data_error mentioning `what`.
double parse_double(std::string_view token, std::string_view what,
                    bool allow_nonfinite = false);
long parse_long(std::string_view token, std::string_view what);

std::string_view trim(std::string_view s);

// Split on a single delimiter; fields are trimmed, empty fields kept.
std::vector<std::string_view> split(std::string_view line, char delim);

// Split a data row on any run of spaces, tabs or commas; no empty fields.
std::vector<std::string_view> split_row(std::string_view line);

bool is_blank_or_comment(std::string_view line);

std::vector<std::string> read_lines(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view content);

// key=value configuration text (one pair per line, '#' comments).
std::map<std::string, std::string> parse_kv(const std::vector<std::string>& lines);

}  // namespace respira::textio
