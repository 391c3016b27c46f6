#pragma once

// File formats for citation tables and dissimilarity matrices.
//
// Square CSV: a header row (corner cell, then column labels) followed by one
// row per object (label, then values). Row and column label order must agree.
// A `# sentinel=<value>` line marks the value used for undefined cells.

#include "asyhplot/core/error.hpp"
#include "asyhplot/data_ingest.hpp"
#include "asyhplot/io/csv.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>

namespace asyhplot::io {

namespace detail {

inline bool has_extension(const std::string& path, const char* ext) {
    auto e = std::filesystem::path(path).extension().string();
    for (auto& c : e) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return e == ext;
}

struct LabeledSquare {
    LabelList labels;
    Matrix values;
};

inline LabeledSquare read_labeled_square(const CsvDocument& doc, const std::string& source) {
    const auto fail = [&](const std::string& msg) { return InputError(source + ": " + msg); };
    if (doc.rows.empty()) throw fail("no header row");
    const auto& header = doc.rows.front();
    if (header.size() < 2) throw fail("header must contain a corner cell and at least one column label");
    LabeledSquare out;
    out.labels.assign(header.begin() + 1, header.end());
    const auto n = static_cast<Index>(out.labels.size());
    {
        std::set<std::string> seen;
        for (std::size_t c = 0; c < out.labels.size(); ++c) {
            if (out.labels[c].empty()) throw fail("column " + std::to_string(c + 2) + " has an empty label");
            if (!seen.insert(out.labels[c]).second) throw fail("duplicate column label '" + out.labels[c] + "'");
        }
    }
    const auto data_rows = static_cast<Index>(doc.rows.size()) - 1;
    if (data_rows != n)
        throw fail("matrix is not square: " + std::to_string(data_rows) + " rows but " + std::to_string(n) + " columns");
    out.values.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        const auto& row = doc.rows[static_cast<std::size_t>(i + 1)];
        const auto line = doc.line_numbers[static_cast<std::size_t>(i + 1)];
        if (static_cast<Index>(row.size()) != n + 1)
            throw fail("line " + std::to_string(line) + " (row '" + (row.empty() ? "" : row[0]) + "'): expected " +
                       std::to_string(n + 1) + " cells, found " + std::to_string(row.size()));
        if (row[0] != out.labels[static_cast<std::size_t>(i)])
            throw fail("line " + std::to_string(line) + ": row label '" + row[0] + "' does not match column label '" +
                       out.labels[static_cast<std::size_t>(i)] + "' at the same position");
        for (Index j = 0; j < n; ++j) {
            try {
                out.values(i, j) = parse_number(row[static_cast<std::size_t>(j + 1)], line, static_cast<std::size_t>(j + 1));
            } catch (const InputError& e) {
                throw fail(std::string(e.what()) + " (row '" + row[0] + "', column '" +
                           out.labels[static_cast<std::size_t>(j)] + "')");
            }
        }
    }
    return out;
}

inline std::int64_t to_count(double v, const std::string& where) {
    if (v < 0 || v != std::floor(v) || v > 9.0e15) throw InputError(where + ": expected a nonnegative integer count");
    return static_cast<std::int64_t>(v);
}

/// Builds the matrix, inferring max_rank from an optional declared sentinel.
inline AsymmetricDissimilarityMatrix finish_dissimilarity(Matrix values, LabelList labels, std::optional<double> sentinel,
                                                          const std::string& source) {
    AsymmetricDissimilarityMatrix out;
    out.delta = std::move(values);
    out.labels = std::move(labels);
    out.validate();
    if (!sentinel) {
        out.max_rank = out.delta.maxCoeff();
        return out;
    }
    double below = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < out.size(); ++i) {
        for (Index j = 0; j < out.size(); ++j) {
            const double v = out.delta(i, j);
            if (v > *sentinel)
                throw InputError(source + ": value " + format_number(v) + " at (" + out.labels[static_cast<std::size_t>(i)] +
                                 ", " + out.labels[static_cast<std::size_t>(j)] + ") exceeds the declared sentinel");
            if (v < *sentinel) below = std::max(below, v);
        }
    }
    if (!std::isfinite(below)) throw InputError(source + ": every entry equals the sentinel; no rank scale exists");
    if (below + 1.0 != *sentinel)
        throw InputError(source + ": declared sentinel " + format_number(*sentinel) + " is not one plus the largest rank " +
                         format_number(below));
    out.max_rank = below;
    return out;
}

}  // namespace detail

inline AsymmetricDissimilarityMatrix parse_dissimilarity_csv(std::istream& in, const std::string& source = "<input>") {
    const auto doc = parse_csv(in);
    auto square = detail::read_labeled_square(doc, source);
    std::optional<double> sentinel;
    if (auto it = doc.meta.find("sentinel"); it != doc.meta.end()) sentinel = parse_number(it->second, 0, 0);
    return detail::finish_dissimilarity(std::move(square.values), std::move(square.labels), sentinel, source);
}

inline AsymmetricDissimilarityMatrix dissimilarity_from_json(const nlohmann::json& j, const std::string& source = "<input>") {
    try {
        LabelList labels = j.at("labels").get<LabelList>();
        const auto& rows = j.at("delta");
        const auto n = static_cast<Index>(labels.size());
        if (static_cast<Index>(rows.size()) != n) throw InputError(source + ": 'delta' row count does not match labels");
        Matrix values(n, n);
        for (Index i = 0; i < n; ++i) {
            const auto& row = rows.at(static_cast<std::size_t>(i));
            if (static_cast<Index>(row.size()) != n)
                throw InputError(source + ": 'delta' row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                                 " entries, expected " + std::to_string(n));
            for (Index c = 0; c < n; ++c) values(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
        }
        std::optional<double> sentinel;
        if (j.contains("sentinel")) sentinel = j.at("sentinel").get<double>();
        return detail::finish_dissimilarity(std::move(values), std::move(labels), sentinel, source);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(source + ": " + e.what());
    }
}

/// Reads a dissimilarity matrix from CSV, or JSON when the extension is `.json`.
inline AsymmetricDissimilarityMatrix load_dissimilarity(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    if (detail::has_extension(path, ".json")) {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InputError(path + ": " + e.what());
        }
        return dissimilarity_from_json(j, path);
    }
    return parse_dissimilarity_csv(in, path);
}

inline void write_dissimilarity_csv(std::ostream& out, const AsymmetricDissimilarityMatrix& d,
                                    std::map<std::string, std::string> meta = {}) {
    meta["sentinel"] = format_number(d.sentinel());
    write_meta(out, meta);
    std::vector<std::string> header{"label"};
    header.insert(header.end(), d.labels.begin(), d.labels.end());
    write_row(out, header);
    for (Index i = 0; i < d.size(); ++i) {
        std::vector<std::string> row{d.labels[static_cast<std::size_t>(i)]};
        for (Index j = 0; j < d.size(); ++j) row.push_back(format_number(d.delta(i, j)));
        write_row(out, row);
    }
}

inline CitationTable citation_table_from_json(const nlohmann::json& j, const std::string& source = "<input>") {
    try {
        CitationTable t;
        t.labels = j.at("labels").get<LabelList>();
        const auto n = static_cast<Index>(t.labels.size());
        const auto& rows = j.at("cites");
        if (static_cast<Index>(rows.size()) != n) throw InputError(source + ": 'cites' row count does not match labels");
        t.cites.resize(n, n);
        for (Index i = 0; i < n; ++i) {
            const auto& row = rows.at(static_cast<std::size_t>(i));
            if (static_cast<Index>(row.size()) != n)
                throw InputError(source + ": 'cites' row " + std::to_string(i + 1) + " has wrong length");
            for (Index c = 0; c < n; ++c)
                t.cites(i, c) = detail::to_count(row.at(static_cast<std::size_t>(c)).get<double>(),
                                                 source + ": cites[" + std::to_string(i + 1) + "][" + std::to_string(c + 1) + "]");
        }
        const auto papers = j.at("papers").get<std::vector<double>>();
        const auto refs = j.at("refs").get<std::vector<double>>();
        if (static_cast<Index>(papers.size()) != n || static_cast<Index>(refs.size()) != n)
            throw InputError(source + ": 'papers' and 'refs' need one entry per label");
        t.papers.resize(n);
        t.refs.resize(n);
        for (Index i = 0; i < n; ++i) {
            t.papers(i) = detail::to_count(papers[static_cast<std::size_t>(i)], source + ": papers[" + std::to_string(i + 1) + "]");
            t.refs(i) = detail::to_count(refs[static_cast<std::size_t>(i)], source + ": refs[" + std::to_string(i + 1) + "]");
        }
        t.validate();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(source + ": " + e.what());
    }
}

/// cites.csv is a labeled square of counts; meta.csv has columns label,papers,refs
/// (any row order, any column order).
inline CitationTable load_citation_table(const std::string& cites_path, const std::string& meta_path) {
    CitationTable t;
    {
        const auto square = detail::read_labeled_square(read_csv(cites_path), cites_path);
        t.labels = square.labels;
        const Index n = square.values.rows();
        t.cites.resize(n, n);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j)
                t.cites(i, j) = detail::to_count(square.values(i, j), cites_path + ": row '" + t.labels[static_cast<std::size_t>(i)] +
                                                                          "', column '" + t.labels[static_cast<std::size_t>(j)] + "'");
        }
    }
    const auto meta = read_csv(meta_path);
    if (meta.rows.empty()) throw InputError(meta_path + ": no header row");
    const auto& header = meta.rows.front();
    const auto column = [&](const char* name) -> std::size_t {
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (header[c] == name) return c;
        }
        throw InputError(meta_path + ": missing column '" + name + "'");
    };
    const auto c_label = column("label"), c_papers = column("papers"), c_refs = column("refs");
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> by_label;
    for (std::size_t r = 1; r < meta.rows.size(); ++r) {
        const auto& row = meta.rows[r];
        const auto line = meta.line_numbers[r];
        const auto where = meta_path + ": line " + std::to_string(line);
        if (row.size() != header.size())
            throw InputError(where + ": expected " + std::to_string(header.size()) + " cells, found " + std::to_string(row.size()));
        const auto papers = detail::to_count(parse_number(row[c_papers], line, c_papers), where + ", column 'papers'");
        const auto refs = detail::to_count(parse_number(row[c_refs], line, c_refs), where + ", column 'refs'");
        if (!by_label.emplace(row[c_label], std::make_pair(papers, refs)).second)
            throw InputError(where + ": duplicate label '" + row[c_label] + "'");
    }
    const auto n = t.size();
    t.papers.resize(n);
    t.refs.resize(n);
    for (Index i = 0; i < n; ++i) {
        const auto& label = t.labels[static_cast<std::size_t>(i)];
        const auto it = by_label.find(label);
        if (it == by_label.end()) throw InputError(meta_path + ": no row for label '" + label + "'");
        t.papers(i) = it->second.first;
        t.refs(i) = it->second.second;
    }
    if (static_cast<Index>(by_label.size()) != n) throw InputError(meta_path + ": contains labels absent from " + cites_path);
    t.validate();
    return t;
}

inline CitationTable load_citation_table(const std::string& json_path) {
    std::ifstream in(json_path);
    if (!in) throw InputError("cannot open '" + json_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(json_path + ": " + e.what());
    }
    return citation_table_from_json(j, json_path);
}

}  // namespace asyhplot::io
