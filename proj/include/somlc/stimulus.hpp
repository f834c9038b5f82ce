#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "somlc/error.hpp"
#include "somlc/vec.hpp"

namespace somlc {

/// A labeled input vector presented to the map. Probes carry an empty
/// category and take part in the domain without contributing statistics.
struct Stimulus {
    std::string id;
    std::string category;
    Vector vector;

    bool is_probe() const { return category.empty(); }
};

inline bool is_identifier(std::string_view s) {
    auto head = [](char c) { return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (s.empty() || !head(s[0])) return false;
    for (char c : s.substr(1)) {
        if (!tail(c)) return false;
    }
    return true;
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

inline double parse_double(std::string_view text, std::size_t line, std::size_t column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("invalid number '" + std::string(text) + "'", line, column);
    }
    return value;
}

}  // namespace detail

/// Reads the stimulus CSV format: header `id,category,f1,...,fm`, one row per
/// stimulus, empty category field for probes. Plain fields, no quoting.
inline std::vector<Stimulus> read_stimulus_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file, expected CSV header", 1, 1);
    auto header = detail::split_csv_line(detail::trim(line));
    if (header.size() < 3 || header[0] != "id") {
        throw ParseError("CSV header must start with 'id,category,f1,...'", 1, 1);
    }
    if (header[1] != "category") {
        throw ParseError("CSV header is missing the 'category' column", 1, 1);
    }
    const std::size_t dim = header.size() - 2;

    std::vector<Stimulus> out;
    std::set<std::string> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = detail::trim(line);
        if (trimmed.empty()) continue;
        auto fields = detail::split_csv_line(trimmed);
        if (fields.size() != dim + 2) {
            throw ParseError("expected " + std::to_string(dim + 2) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no, 1);
        }
        Stimulus s;
        s.id = detail::trim(fields[0]);
        s.category = detail::trim(fields[1]);
        if (s.id.empty()) throw ParseError("empty stimulus id", line_no, 1);
        if (!seen_ids.insert(s.id).second) {
            throw ParseError("duplicate stimulus id '" + s.id + "'", line_no, 1);
        }
        if (!s.category.empty() && !is_identifier(s.category)) {
            throw ParseError("category name '" + s.category + "' is not an identifier", line_no, 1);
        }
        s.vector.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            s.vector.push_back(detail::parse_double(detail::trim(fields[i + 2]), line_no, i + 3));
        }
        if (!all_finite(s.vector)) {
            throw ParseError("stimulus '" + s.id + "' has a non-finite component", line_no, 1);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<Stimulus> read_stimulus_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return read_stimulus_csv(in);
}

}  // namespace somlc
