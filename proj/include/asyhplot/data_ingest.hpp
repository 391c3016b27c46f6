#pragma once

// Raw directed citation counts -> relatedness factors -> rank dissimilarities.

#include "asyhplot/core/error.hpp"
#include "asyhplot/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace asyhplot {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Directed citation counts for one reference year. cites(i, j) counts
/// citations from object i to object j; papers(j) is the number of papers
/// object j published, refs(i) the number of references object i made.
struct CitationTable {
    LabelList labels;
    CountMatrix cites;
    CountVector papers;
    CountVector refs;

    Index size() const { return static_cast<Index>(labels.size()); }

    void validate() const {
        const Index n = size();
        if (n == 0) throw InputError("citation table is empty");
        if (cites.rows() != n || cites.cols() != n)
            throw InputError("citation matrix is " + std::to_string(cites.rows()) + "x" + std::to_string(cites.cols()) +
                             " but there are " + std::to_string(n) + " labels");
        if (papers.size() != n || refs.size() != n) throw InputError("papers/refs vectors must have one entry per label");
        std::set<std::string> seen;
        for (Index i = 0; i < n; ++i) {
            if (!seen.insert(labels[static_cast<std::size_t>(i)]).second)
                throw InputError("duplicate label '" + labels[static_cast<std::size_t>(i)] + "'");
        }
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                if (cites(i, j) < 0)
                    throw InputError("negative citation count at (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
            }
        }
        for (Index i = 0; i < n; ++i) {
            if (papers(i) <= 0)
                throw InputError("papers count must be positive (index " + std::to_string(i + 1) + ", '" +
                                 labels[static_cast<std::size_t>(i)] + "')");
            if (refs(i) <= 0)
                throw InputError("refs count must be positive (index " + std::to_string(i + 1) + ", '" +
                                 labels[static_cast<std::size_t>(i)] + "')");
        }
    }
};

/// Relatedness factors with an explicit per-cell "undefined" marker (no citations).
struct RelatednessMatrix {
    Matrix values;  // 0 where undefined
    Mask defined;
    LabelList labels;

    Index size() const { return values.rows(); }
    bool is_defined(Index i, Index j) const { return defined(i, j); }
};

/// Square matrix of directed dissimilarities. Entries equal to sentinel()
/// stand for undefined relationships; symmetry and a zero diagonal are not required.
struct AsymmetricDissimilarityMatrix {
    Matrix delta;
    double max_rank = 0.0;
    LabelList labels;

    Index size() const { return delta.rows(); }
    double sentinel() const { return max_rank + 1.0; }
    bool is_undefined(Index i, Index j) const { return delta(i, j) == sentinel(); }

    void validate() const {
        if (delta.rows() != delta.cols())
            throw InputError("dissimilarity matrix must be square, got " + std::to_string(delta.rows()) + "x" +
                             std::to_string(delta.cols()));
        if (delta.rows() == 0) throw InputError("dissimilarity matrix is empty");
        if (static_cast<Index>(labels.size()) != delta.rows()) throw InputError("label count does not match matrix size");
        if (!delta.allFinite()) throw InputError("dissimilarity matrix has non-finite entries");
        if ((delta.array() < 0.0).any()) throw InputError("dissimilarities must be nonnegative");
        std::set<std::string> seen;
        for (const auto& l : labels) {
            if (!seen.insert(l).second) throw InputError("duplicate label '" + l + "'");
        }
    }

    /// Wraps a plain nonnegative matrix, taking its maximum as the rank scale.
    static AsymmetricDissimilarityMatrix from_values(Matrix values, LabelList labels = {}) {
        AsymmetricDissimilarityMatrix out;
        if (labels.empty()) labels = numbered_labels(values.rows());
        out.max_rank = values.size() ? values.maxCoeff() : 0.0;
        out.delta = std::move(values);
        out.labels = std::move(labels);
        out.validate();
        return out;
    }
};

/// R(i, j) = H(i->j) * 1e6 / (Pap(j) * Ref(i)); undefined where H(i->j) = 0.
inline RelatednessMatrix compute_relatedness(const CitationTable& counts) {
    counts.validate();
    const Index n = counts.size();
    RelatednessMatrix rel;
    rel.values = Matrix::Zero(n, n);
    rel.defined = Mask::Constant(n, n, false);
    rel.labels = counts.labels;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            const std::int64_t h = counts.cites(i, j);
            if (h == 0) continue;
            // Integer products below 2^53 are exact in double, so equal ratios
            // produce bit-identical values and tie detection is exact.
            const double numerator = static_cast<double>(h) * 1e6;
            const double denominator = static_cast<double>(counts.papers(j)) * static_cast<double>(counts.refs(i));
            rel.values(i, j) = numerator / denominator;
            rel.defined(i, j) = true;
        }
    }
    return rel;
}

/// Joint descending rank of every defined cell (rank 1 = most related), ties
/// averaged; undefined cells get max_rank + 1.
inline AsymmetricDissimilarityMatrix rank_transform(const RelatednessMatrix& rel) {
    const Index n = rel.size();
    std::vector<std::pair<double, Index>> cells;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (rel.defined(i, j)) cells.emplace_back(rel.values(i, j), j * n + i);
        }
    }
    if (cells.empty()) throw InputError("relatedness matrix has no defined entries; no rank scale exists");

    std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    AsymmetricDissimilarityMatrix out;
    out.delta = Matrix::Zero(n, n);
    out.labels = rel.labels.empty() ? numbered_labels(n) : rel.labels;
    double max_rank = 0.0;
    std::size_t start = 0;
    while (start < cells.size()) {
        std::size_t end = start + 1;
        while (end < cells.size() && cells[end].first == cells[start].first) ++end;
        // positions start..end-1 hold ranks start+1..end
        const double rank = 0.5 * static_cast<double>(start + 1 + end);
        for (std::size_t t = start; t < end; ++t) {
            const Index flat = cells[t].second;
            out.delta(flat % n, flat / n) = rank;
        }
        max_rank = std::max(max_rank, rank);
        start = end;
    }
    out.max_rank = max_rank;
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            if (!rel.defined(i, j)) out.delta(i, j) = max_rank + 1.0;
        }
    }
    return out;
}

/// s(i, j) = (max_rank + 1) - delta(i, j). Self-inverse for a fixed max_rank.
inline Matrix to_similarity(const Matrix& delta, double max_rank) {
    return (max_rank + 1.0) - delta.array();
}

inline Matrix to_similarity(const AsymmetricDissimilarityMatrix& d) {
    d.validate();
    if ((d.delta.array() > d.sentinel()).any())
        throw InputError("dissimilarity exceeds the undefined sentinel " + std::to_string(d.sentinel()));
    return to_similarity(d.delta, d.max_rank);
}

/// Summary of a rank matrix, as recorded next to ingested files.
struct RankSummary {
    double max_rank = 0.0;
    double sentinel = 0.0;
    std::size_t defined_cells = 0;
    std::size_t undefined_cells = 0;
    std::size_t tie_groups = 0;    // distinct values shared by more than one defined cell
    std::size_t tied_cells = 0;    // defined cells belonging to such a group
    std::vector<std::pair<Index, Index>> undefined;  // (row, column), row-major order
};

inline RankSummary summarize_ranks(const AsymmetricDissimilarityMatrix& d) {
    RankSummary s;
    s.max_rank = d.max_rank;
    s.sentinel = d.sentinel();
    std::vector<double> defined;
    for (Index i = 0; i < d.size(); ++i) {
        for (Index j = 0; j < d.size(); ++j) {
            if (d.is_undefined(i, j)) {
                s.undefined.emplace_back(i, j);
            } else {
                defined.push_back(d.delta(i, j));
            }
        }
    }
    s.undefined_cells = s.undefined.size();
    s.defined_cells = defined.size();
    std::sort(defined.begin(), defined.end());
    for (std::size_t a = 0; a < defined.size();) {
        std::size_t b = a + 1;
        while (b < defined.size() && defined[b] == defined[a]) ++b;
        if (b - a > 1) {
            ++s.tie_groups;
            s.tied_cells += b - a;
        }
        a = b;
    }
    return s;
}

}  // namespace asyhplot
