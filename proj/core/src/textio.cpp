#include "respira/textio.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "respira/errors.hpp"

namespace respira::textio {

std::string fmt(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("to_chars failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view token, std::string_view what, bool allow_nonfinite) {
    token = trim(token);
    double value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || token.empty()) {
        // from_chars accepts "nan"/"inf"; anything else malformed lands here.
        throw data_error("cannot parse '" + std::string(token) + "' as number for " +
                         std::string(what));
    }
    if (!allow_nonfinite && !std::isfinite(value)) {
        throw data_error("non-finite value '" + std::string(token) + "' for " +
                         std::string(what));
    }
    return value;
}

long parse_long(std::string_view token, std::string_view what) {
    token = trim(token);
    long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
        throw data_error("cannot parse '" + std::string(token) + "' as integer for " +
                         std::string(what));
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ','; };
    while (i < line.size()) {
        while (i < line.size() && is_sep(line[i])) ++i;
        std::size_t start = i;
        while (i < line.size() && !is_sep(line[i])) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool is_blank_or_comment(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open file for writing: " + path.string());
    out << content;
    if (!out) throw data_error("write failed: " + path.string());
}

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& lines) {
    std::map<std::string, std::string> kv;
    for (const auto& line : lines) {
        if (is_blank_or_comment(line)) continue;
        auto pos = line.find('=');
        if (pos == std::string::npos)
            throw data_error("expected key=value line, got: " + line);
        auto key = std::string(trim(std::string_view(line).substr(0, pos)));
        auto value = std::string(trim(std::string_view(line).substr(pos + 1)));
        if (key.empty()) throw data_error("empty key in line: " + line);
        kv[key] = value;
    }
    return kv;
}

}  // namespace respira::textio
