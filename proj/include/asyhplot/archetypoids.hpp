#pragma once

// Archetypoid analysis: choose k observed rows (archetypoids) so that every
// row is well approximated by a convex combination of them, minimizing
//   RSS = sum_i || x_i - sum_j alpha_ij z_j ||^2.

#include "asyhplot/core/error.hpp"
#include "asyhplot/core/types.hpp"
#include "asyhplot/hplot.hpp"
#include "asyhplot/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace asyhplot {

struct DataMatrix {
    Matrix x;
    LabelList labels;

    Index rows() const { return x.rows(); }
    Index cols() const { return x.cols(); }

    static DataMatrix from(Matrix x, LabelList labels = {}) {
        if (labels.empty()) labels = numbered_labels(x.rows());
        return DataMatrix{std::move(x), std::move(labels)};
    }
};

struct AlphaFit {
    Matrix alpha;  // n x k, rows on the simplex
    double rss = 0.0;
};

struct AdaModel {
    std::vector<Index> archetypoids;  // rows of the data matrix, in column order of alpha
    Matrix alpha;
    double rss = 0.0;
    std::vector<double> trace;        // RSS after BUILD and after each applied swap
    std::size_t swaps = 0;
    bool iteration_capped = false;
    std::uint64_t subsets_evaluated = 0;  // set by ada_exhaustive

    Index k() const { return static_cast<Index>(archetypoids.size()); }
};

struct AdaOptions {
    double penalty = 200.0;
    int max_iter = 100;
    double rel_tol = 1e-10;
};

struct ScreeplotPoint {
    Index k = 0;
    double rss = 0.0;
    double envelope = 0.0;  // min over k' <= k of rss
    std::vector<Index> archetypoids;
};

struct Screeplot {
    std::vector<ScreeplotPoint> points;
    std::optional<Index> elbow;  // advisory
};

/// Row j = (to-profile of j, from-profile of j): the n x 4 table ADA runs on.
inline DataMatrix combine_profiles(const HPlotEmbedding& emb) {
    if (emb.dimension() != 2)
        throw InputError("combine_profiles: needs a two-dimensional embedding, got p = " + std::to_string(emb.dimension()));
    if (emb.coords.rows() % 2 != 0) throw InputError("combine_profiles: embedding must have 2n rows");
    const Index n = emb.objects();
    DataMatrix out;
    out.x.resize(n, 4);
    out.x.leftCols(2) = emb.coords.topRows(n);
    out.x.rightCols(2) = emb.coords.bottomRows(n);
    out.labels = emb.labels.empty() ? numbered_labels(n) : emb.labels;
    return out;
}

namespace detail {

inline void check_indices(const DataMatrix& data, const std::vector<Index>& indices) {
    if (indices.empty()) throw InputError("archetypoid set is empty (k = 0)");
    std::set<Index> seen;
    for (Index idx : indices) {
        if (idx < 0 || idx >= data.rows())
            throw InputError("archetypoid index " + std::to_string(idx) + " is out of range [0, " + std::to_string(data.rows()) + ")");
        if (!seen.insert(idx).second) throw InputError("duplicate archetypoid index " + std::to_string(idx));
    }
}

inline Matrix gather_rows(const Matrix& x, const std::vector<Index>& indices) {
    Matrix z(static_cast<Index>(indices.size()), x.cols());
    for (std::size_t j = 0; j < indices.size(); ++j) z.row(static_cast<Index>(j)) = x.row(indices[j]);
    return z;
}

inline double squared_residual(const Matrix& x, Index i, const Matrix& z, const Vector& w) {
    return (x.row(i).transpose() - z.transpose() * w).squaredNorm();
}

/// Stops early once the running sum reaches `bound`; the partial sum returned
/// is then a lower bound, since every term is nonnegative.
inline double subset_rss(const Matrix& x, const std::vector<Index>& indices, double penalty,
                         double bound = std::numeric_limits<double>::infinity()) {
    const Matrix z = gather_rows(x, indices);
    std::vector<bool> member(static_cast<std::size_t>(x.rows()), false);
    for (Index idx : indices) member[static_cast<std::size_t>(idx)] = true;
    double rss = 0.0;
    for (Index i = 0; i < x.rows() && rss < bound; ++i) {
        if (member[static_cast<std::size_t>(i)]) continue;  // a selected row reproduces itself exactly
        const Vector w = simplex_least_squares(z, x.row(i).transpose(), penalty);
        rss += squared_residual(x, i, z, w);
    }
    return rss;
}

/// Memoised subset_rss keyed by the sorted subset, so the value does not depend
/// on the order of the indices and repeated subsets across starts cost a lookup.
class RssCache {
public:
    RssCache(const Matrix& x, double penalty) : x_(x), penalty_(penalty) {}

    /// Exact RSS when it is below `bound`, otherwise some value >= `bound`.
    double operator()(std::vector<Index> indices, double bound = std::numeric_limits<double>::infinity()) {
        std::sort(indices.begin(), indices.end());
        auto it = memo_.find(indices);
        if (it != memo_.end() && (it->second.exact || it->second.value >= bound)) return it->second.value;
        const double r = subset_rss(x_, indices, penalty_, bound);
        const Entry e{r, r < bound};
        if (it != memo_.end())
            it->second = e;
        else
            memo_.emplace(std::move(indices), e);
        return r;
    }

    double penalty() const { return penalty_; }

private:
    const Matrix& x_;
    double penalty_;
    struct Entry {
        double value;
        bool exact;  // false: value is only a lower bound
    };
    std::map<std::vector<Index>, Entry> memo_;
};

inline bool improves(double candidate, double current, double rel_tol) {
    return candidate < current - rel_tol * std::abs(current);
}

}  // namespace detail

/// Mixture weights of every row over the given archetypoids, plus the total RSS.
inline AlphaFit solve_alpha(const DataMatrix& data, const std::vector<Index>& archetypoids, double penalty = 200.0) {
    detail::check_indices(data, archetypoids);
    const Matrix z = detail::gather_rows(data.x, archetypoids);
    AlphaFit fit;
    fit.alpha.resize(data.rows(), static_cast<Index>(archetypoids.size()));
    for (Index i = 0; i < data.rows(); ++i) {
        const Vector w = simplex_least_squares(z, data.x.row(i).transpose(), penalty);
        fit.alpha.row(i) = w.transpose();
        fit.rss += detail::squared_residual(data.x, i, z, w);
    }
    return fit;
}

/// Greedy forward selection seeded with `first`: each step adds the candidate
/// whose inclusion gives the lowest RSS, ties to the lowest row index.
inline std::vector<Index> ada_build_from(const DataMatrix& data, Index k, Index first, detail::RssCache& rss) {
    const Index n = data.rows();
    if (k < 1 || k > n) throw InputError("ada_build: k = " + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
    if (first < 0 || first >= n) throw InputError("ada_build: first index " + std::to_string(first) + " is out of range");
    if (!data.x.allFinite()) throw InputError("ada_build: data matrix has non-finite entries");
    std::vector<Index> chosen{first};
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    used[static_cast<std::size_t>(first)] = true;
    while (static_cast<Index>(chosen.size()) < k) {
        Index best = -1;
        double best_rss = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            auto trial = chosen;
            trial.push_back(c);
            const double r = rss(trial, best_rss);
            if (r < best_rss) {
                best_rss = r;
                best = c;
            }
        }
        chosen.push_back(best);
        used[static_cast<std::size_t>(best)] = true;
    }
    return chosen;
}

inline std::vector<Index> ada_build_from(const DataMatrix& data, Index k, Index first, double penalty = 200.0) {
    detail::RssCache rss(data.x, penalty);
    return ada_build_from(data, k, first, rss);
}

/// Greedy forward selection run from every possible first row; returns the
/// built set with the lowest RSS (ties to the lowest first row). For k = 1 this
/// is the squared-distance medoid.
inline std::vector<Index> ada_build(const DataMatrix& data, Index k, double penalty = 200.0) {
    detail::RssCache rss(data.x, penalty);
    std::vector<Index> best;
    double best_rss = std::numeric_limits<double>::infinity();
    for (Index first = 0; first < data.rows(); ++first) {
        auto built = ada_build_from(data, k, first, rss);
        const double r = rss(built);
        if (best.empty() || detail::improves(r, best_rss, 1e-10)) {
            best_rss = r;
            best = std::move(built);
        }
    }
    return best;
}

/// Steepest-descent exchange: each pass applies the single best strictly
/// improving (selected, unselected) swap, until none improves by more than
/// `rel_tol` or `max_iter` passes have run.
inline AdaModel ada_swap(const DataMatrix& data, const std::vector<Index>& start, const AdaOptions& options, detail::RssCache& rss) {
    detail::check_indices(data, start);
    const Index n = data.rows();
    std::vector<Index> current = start;
    double current_rss = rss(current);

    AdaModel model;
    model.trace.push_back(current_rss);
    bool converged = false;
    for (int pass = 0; pass < options.max_iter; ++pass) {
        std::vector<bool> selected(static_cast<std::size_t>(n), false);
        for (Index idx : current) selected[static_cast<std::size_t>(idx)] = true;

        double best_rss = current_rss;
        std::size_t best_pos = 0;
        Index best_candidate = -1;
        for (Index candidate = 0; candidate < n; ++candidate) {
            if (selected[static_cast<std::size_t>(candidate)]) continue;
            for (std::size_t pos = 0; pos < current.size(); ++pos) {
                auto trial = current;
                trial[pos] = candidate;
                const double r = rss(trial, best_rss);
                if (r < best_rss) {
                    best_rss = r;
                    best_pos = pos;
                    best_candidate = candidate;
                }
            }
        }
        if (best_candidate < 0 || !detail::improves(best_rss, current_rss, options.rel_tol)) {
            converged = true;
            break;
        }
        current[best_pos] = best_candidate;
        current_rss = best_rss;
        model.trace.push_back(current_rss);
        ++model.swaps;
    }
    model.iteration_capped = !converged;

    auto fit = solve_alpha(data, current, options.penalty);
    model.archetypoids = std::move(current);
    model.alpha = std::move(fit.alpha);
    model.rss = fit.rss;
    return model;
}

inline AdaModel ada_swap(const DataMatrix& data, const std::vector<Index>& start, const AdaOptions& options = {}) {
    detail::RssCache rss(data.x, options.penalty);
    return ada_swap(data, start, options, rss);
}

/// SWAP from the greedy build of every first row; keeps the lowest final RSS.
/// Results within `rel_tol` of each other count as ties, won by the lowest first row. Deterministic for a given data matrix.
inline AdaModel ada_fit(const DataMatrix& data, Index k, const AdaOptions& options = {}) {
    detail::RssCache rss(data.x, options.penalty);
    std::set<std::vector<Index>> started;
    std::optional<AdaModel> best;
    for (Index first = 0; first < data.rows(); ++first) {
        const auto start = ada_build_from(data, k, first, rss);
        auto key = start;
        std::sort(key.begin(), key.end());
        if (!started.insert(std::move(key)).second) continue;
        auto model = ada_swap(data, start, options, rss);
        if (!best || detail::improves(model.rss, best->rss, options.rel_tol)) best = std::move(model);
    }
    if (!best) throw InputError("ada_fit: data matrix has no rows");
    return std::move(*best);
}

/// Number of k-subsets of n, saturating at `cap + 1`.
inline std::uint64_t combinations_capped(Index n, Index k, std::uint64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long double c = 1.0L;
    for (Index i = 1; i <= k; ++i) {
        c = c * static_cast<long double>(n - k + i) / static_cast<long double>(i);
        if (c > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(std::llround(c));
}

/// Global optimum by enumerating every k-subset (lexicographic order, first
/// minimum kept). Refuses when C(n, k) exceeds `budget`.
inline AdaModel ada_exhaustive(const DataMatrix& data, Index k, std::uint64_t budget = 1'000'000,
                               const AdaOptions& options = {}) {
    const Index n = data.rows();
    if (k < 1 || k > n) throw InputError("ada_exhaustive: k = " + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
    const auto count = combinations_capped(n, k, budget);
    if (count > budget)
        throw InputError("ada_exhaustive: C(" + std::to_string(n) + ", " + std::to_string(k) + ") exceeds the enumeration budget of " +
                         std::to_string(budget) + " subsets");

    std::vector<Index> subset(static_cast<std::size_t>(k));
    for (Index j = 0; j < k; ++j) subset[static_cast<std::size_t>(j)] = j;
    std::vector<Index> best = subset;
    double best_rss = std::numeric_limits<double>::infinity();
    std::uint64_t evaluated = 0;
    while (true) {
        const double r = detail::subset_rss(data.x, subset, options.penalty);
        ++evaluated;
        if (r < best_rss) {
            best_rss = r;
            best = subset;
        }
        Index pos = k - 1;
        while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
        if (pos < 0) break;
        ++subset[static_cast<std::size_t>(pos)];
        for (Index t = pos + 1; t < k; ++t) subset[static_cast<std::size_t>(t)] = subset[static_cast<std::size_t>(t - 1)] + 1;
    }

    AdaModel model;
    auto fit = solve_alpha(data, best, options.penalty);
    model.archetypoids = std::move(best);
    model.alpha = std::move(fit.alpha);
    model.rss = fit.rss;
    model.trace.push_back(model.rss);
    model.subsets_evaluated = evaluated;
    return model;
}

/// The k whose RSS sits at the largest second forward difference
/// rss[t] - 2 rss[t+1] + rss[t+2], i.e. the middle point of the sharpest bend.
inline std::optional<Index> suggest_elbow(const std::vector<ScreeplotPoint>& points) {
    if (points.size() < 3) return std::nullopt;
    std::optional<Index> elbow;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t + 2 < points.size(); ++t) {
        const double second = points[t].rss - 2.0 * points[t + 1].rss + points[t + 2].rss;
        if (second > best) {
            best = second;
            elbow = points[t + 1].k;
        }
    }
    return elbow;
}

/// RSS against k over [k_min, k_max] with an advisory elbow.
inline Screeplot screeplot(const DataMatrix& data, Index k_min, Index k_max, const AdaOptions& options = {}) {
    if (k_min < 1 || k_max > data.rows() || k_min > k_max)
        throw InputError("screeplot: k range " + std::to_string(k_min) + ".." + std::to_string(k_max) + " must lie within [1, " +
                         std::to_string(data.rows()) + "]");
    Screeplot plot;
    double envelope = std::numeric_limits<double>::infinity();
    for (Index k = k_min; k <= k_max; ++k) {
        const auto model = ada_fit(data, k, options);
        envelope = std::min(envelope, model.rss);
        plot.points.push_back({k, model.rss, envelope, model.archetypoids});
    }
    plot.elbow = suggest_elbow(plot.points);
    return plot;
}

}  // namespace asyhplot
