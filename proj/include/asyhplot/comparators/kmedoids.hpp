#pragma once

// PAM k-medoids (BUILD + SWAP) on Euclidean distances, with silhouettes.

#include "asyhplot/archetypoids.hpp"
#include "asyhplot/core/error.hpp"
#include "asyhplot/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace asyhplot {

struct MedoidClustering {
    Index k = 0;
    std::vector<Index> medoids;
    std::vector<Index> assignment;  // position in `medoids` of each point's medoid
    std::vector<double> silhouettes;
    double average_silhouette = 0.0;
    double cost = 0.0;      // sum of distances to the assigned medoid
    bool degenerate = false;  // some silhouette had a zero denominator and was set to 0
};

inline Matrix euclidean_distances(const Matrix& x) {
    const Index n = x.rows();
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (x.row(i) - x.row(j)).norm();
    }
    return d;
}

namespace detail {

inline double medoid_cost(const Matrix& dist, const std::vector<Index>& medoids) {
    double cost = 0.0;
    for (Index i = 0; i < dist.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Index m : medoids) best = std::min(best, dist(i, m));
        cost += best;
    }
    return cost;
}

}  // namespace detail

inline std::vector<Index> assign_to_medoids(const Matrix& dist, const std::vector<Index>& medoids) {
    std::vector<Index> assignment(static_cast<std::size_t>(dist.rows()));
    for (Index i = 0; i < dist.rows(); ++i) {
        Index best = 0;
        for (std::size_t m = 1; m < medoids.size(); ++m) {
            if (dist(i, medoids[m]) < dist(i, medoids[static_cast<std::size_t>(best)])) best = static_cast<Index>(m);
        }
        // a medoid always belongs to its own cluster, even when tied with another
        for (std::size_t m = 0; m < medoids.size(); ++m)
            if (medoids[m] == i) best = static_cast<Index>(m);
        assignment[static_cast<std::size_t>(i)] = best;
    }
    return assignment;
}

/// Per-point silhouette (b - a) / max(a, b). Singletons score 0.
inline std::vector<double> silhouettes(const Matrix& dist, const std::vector<Index>& assignment, Index k, bool* degenerate = nullptr) {
    const Index n = dist.rows();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
    for (Index c : assignment) ++sizes[static_cast<std::size_t>(c)];
    for (Index i = 0; i < n; ++i) {
        const Index own = assignment[static_cast<std::size_t>(i)];
        if (sizes[static_cast<std::size_t>(own)] <= 1) continue;
        std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
        for (Index j = 0; j < n; ++j) {
            if (j != i) sums[static_cast<std::size_t>(assignment[static_cast<std::size_t>(j)])] += dist(i, j);
        }
        const double a = sums[static_cast<std::size_t>(own)] / static_cast<double>(sizes[static_cast<std::size_t>(own)] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < k; ++c) {
            if (c != own && sizes[static_cast<std::size_t>(c)] > 0)
                b = std::min(b, sums[static_cast<std::size_t>(c)] / static_cast<double>(sizes[static_cast<std::size_t>(c)]));
        }
        if (!std::isfinite(b)) continue;
        const double denom = std::max(a, b);
        if (denom == 0.0) {
            if (degenerate) *degenerate = true;
            continue;
        }
        out[static_cast<std::size_t>(i)] = (b - a) / denom;
    }
    return out;
}

/// PAM on a precomputed distance matrix. Ties go to the lowest index.
inline MedoidClustering pam(const Matrix& dist, Index k) {
    const Index n = dist.rows();
    if (k < 1 || k > n) throw InputError("pam: k = " + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");

    std::vector<Index> medoids;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    while (static_cast<Index>(medoids.size()) < k) {
        Index best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            auto trial = medoids;
            trial.push_back(c);
            const double cost = detail::medoid_cost(dist, trial);
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        medoids.push_back(best);
        used[static_cast<std::size_t>(best)] = true;
    }

    double cost = detail::medoid_cost(dist, medoids);
    for (int pass = 0; pass < 1000; ++pass) {
        double best_cost = cost;
        std::size_t best_pos = 0;
        Index best_candidate = -1;
        for (Index c = 0; c < n; ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            for (std::size_t pos = 0; pos < medoids.size(); ++pos) {
                auto trial = medoids;
                trial[pos] = c;
                const double t = detail::medoid_cost(dist, trial);
                if (t < best_cost) {
                    best_cost = t;
                    best_pos = pos;
                    best_candidate = c;
                }
            }
        }
        if (best_candidate < 0 || !(best_cost < cost - 1e-12 * std::abs(cost))) break;
        used[static_cast<std::size_t>(medoids[best_pos])] = false;
        used[static_cast<std::size_t>(best_candidate)] = true;
        medoids[best_pos] = best_candidate;
        cost = best_cost;
    }

    MedoidClustering out;
    out.k = k;
    out.medoids = medoids;
    out.assignment = assign_to_medoids(dist, medoids);
    out.cost = cost;
    out.silhouettes = silhouettes(dist, out.assignment, k, &out.degenerate);
    double sum = 0.0;
    for (double s : out.silhouettes) sum += s;
    out.average_silhouette = sum / static_cast<double>(n);
    return out;
}

/// One PAM clustering per k in [k_min, k_max] on Euclidean distances between rows.
inline std::vector<MedoidClustering> kmedoids_silhouette(const DataMatrix& data, Index k_min, Index k_max) {
    const Index n = data.rows();
    if (k_min < 2 || k_max > n - 1 || k_min > k_max)
        throw InputError("kmedoids_silhouette: k range " + std::to_string(k_min) + ".." + std::to_string(k_max) +
                         " must lie within [2, " + std::to_string(n - 1) + "]");
    const Matrix dist = euclidean_distances(data.x);
    std::vector<MedoidClustering> out;
    for (Index k = k_min; k <= k_max; ++k) out.push_back(pam(dist, k));
    return out;
}

}  // namespace asyhplot
