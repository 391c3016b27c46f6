#pragma once

#include "asyhplot/core/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace asyhplot::io {

/// A parsed CSV document. Lines of the form `# key=value` before or between
/// records are collected into `meta`; other comment lines are ignored.
struct CsvDocument {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // 1-based source line of each row
    std::map<std::string, std::string> meta;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quoted field");
    fields.push_back(was_quoted ? field : trim(field));
    return fields;
}

}  // namespace detail

inline CsvDocument parse_csv(std::istream& in) {
    CsvDocument doc;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            const auto body = detail::trim(std::string_view(t).substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) doc.meta[detail::trim(body.substr(0, eq))] = detail::trim(body.substr(eq + 1));
            continue;
        }
        doc.rows.push_back(detail::split_record(line, line_no));
        doc.line_numbers.push_back(line_no);
    }
    return doc;
}

inline CsvDocument read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return parse_csv(in);
}

/// Strict numeric field parse; rejects empty cells and trailing garbage.
inline double parse_number(const std::string& cell, std::size_t line_no, std::size_t column) {
    const auto where = [&] { return "line " + std::to_string(line_no) + ", column " + std::to_string(column + 1); };
    if (cell.empty()) throw InputError(where() + ": missing value");
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw InputError(where() + ": '" + cell + "' is not a number");
    if (!std::isfinite(value)) throw InputError(where() + ": non-finite value '" + cell + "'");
    return value;
}

inline std::string quote_field(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos && (field.empty() || (field.front() != ' ' && field.back() != ' ')))
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double value) {
    if (value == 0.0) return "0";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline void write_meta(std::ostream& out, const std::map<std::string, std::string>& meta) {
    for (const auto& [key, value] : meta) out << "# " << key << '=' << value << '\n';
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote_field(fields[i]);
    }
    out << '\n';
}

}  // namespace asyhplot::io
