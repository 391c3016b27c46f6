#pragma once

// Thresholded directed citation graph and a Fruchterman-Reingold layout.

#include "asyhplot/core/error.hpp"
#include "asyhplot/core/rng.hpp"
#include "asyhplot/core/types.hpp"
#include "asyhplot/data_ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace asyhplot {

struct CitationEdge {
    Index from = 0;
    Index to = 0;
    double dissimilarity = 0.0;
    double weight = 0.0;  // similarity: sentinel - dissimilarity
};

struct CitationGraph {
    LabelList labels;
    std::vector<CitationEdge> edges;
    double threshold = 0.0;
    Matrix layout;  // n x 2, filled by spring_layout

    Index nodes() const { return static_cast<Index>(labels.size()); }
};

/// Keeps edge i -> j when delta(i, j) <= threshold (low rank, strong link).
/// Every node stays in the graph, isolated or not. Diagonal cells become self-loops.
inline CitationGraph build_network(const AsymmetricDissimilarityMatrix& delta, double threshold) {
    delta.validate();
    if (!(threshold > 0.0)) throw InputError("build_network: threshold must be positive");
    CitationGraph g;
    g.labels = delta.labels;
    g.threshold = threshold;
    for (Index i = 0; i < delta.size(); ++i) {
        for (Index j = 0; j < delta.size(); ++j) {
            const double d = delta.delta(i, j);
            if (d <= threshold) g.edges.push_back({i, j, d, delta.sentinel() - d});
        }
    }
    return g;
}

/// Weakly connected components ignoring self-loops, each sorted, ordered by
/// decreasing size then by smallest member.
inline std::vector<std::vector<Index>> weak_components(const CitationGraph& g) {
    const Index n = g.nodes();
    std::vector<Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Index{0});
    const auto find = [&](Index v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& e : g.edges) {
        if (e.from == e.to) continue;
        const Index a = find(e.from), b = find(e.to);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<std::vector<Index>> groups(static_cast<std::size_t>(n));
    for (Index v = 0; v < n; ++v) groups[static_cast<std::size_t>(find(v))].push_back(v);
    std::vector<std::vector<Index>> out;
    for (auto& grp : groups) {
        if (!grp.empty()) out.push_back(std::move(grp));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return out;
}

/// Nodes outside the largest weakly connected component.
inline std::vector<Index> detached_nodes(const CitationGraph& g) {
    const auto comps = weak_components(g);
    std::vector<Index> out;
    for (std::size_t c = 1; c < comps.size(); ++c) out.insert(out.end(), comps[c].begin(), comps[c].end());
    std::sort(out.begin(), out.end());
    return out;
}

struct LayoutOptions {
    int iterations = 500;
    double initial_temperature = 0.1;
};

/// Fruchterman-Reingold force-directed layout, rescaled to fill the unit square.
/// Edges attract regardless of direction; self-loops are ignored.
inline Matrix spring_layout(const CitationGraph& g, std::uint64_t seed, const LayoutOptions& options = {}) {
    const Index n = g.nodes();
    if (n == 0) throw InputError("spring_layout: graph has no nodes");
    Random rng(seed);
    Matrix pos(n, 2);
    for (Index v = 0; v < n; ++v) {
        pos(v, 0) = rng.uniform();
        pos(v, 1) = rng.uniform();
    }
    if (n == 1) {
        pos.setConstant(0.5);
        return pos;
    }

    std::set<std::pair<Index, Index>> links;
    for (const auto& e : g.edges) {
        if (e.from != e.to) links.emplace(std::min(e.from, e.to), std::max(e.from, e.to));
    }
    const double ideal = std::sqrt(1.0 / static_cast<double>(n));
    const double ideal2 = ideal * ideal;
    constexpr double min_dist = 1e-9;

    Matrix disp(n, 2);
    for (int it = 0; it < options.iterations; ++it) {
        const double temperature =
            options.initial_temperature * (1.0 - static_cast<double>(it) / static_cast<double>(options.iterations));
        disp.setZero();
        for (Index u = 0; u < n; ++u) {
            for (Index v = u + 1; v < n; ++v) {
                RowVector delta = pos.row(u) - pos.row(v);
                double d = delta.norm();
                if (d < min_dist) {
                    // coincident nodes: separate along a fixed index-dependent direction
                    const double angle = 0.7 * static_cast<double>(u + 3 * v);
                    delta << std::cos(angle), std::sin(angle);
                    delta *= min_dist;
                    d = min_dist;
                }
                const RowVector push = delta / d * (ideal2 / d);
                disp.row(u) += push;
                disp.row(v) -= push;
            }
        }
        for (const auto& [u, v] : links) {
            const RowVector delta = pos.row(u) - pos.row(v);
            const double d = delta.norm();
            if (d < min_dist) continue;
            const RowVector pull = delta / d * (d * d / ideal);
            disp.row(u) -= pull;
            disp.row(v) += pull;
        }
        for (Index v = 0; v < n; ++v) {
            const double len = disp.row(v).norm();
            if (len > 0.0) pos.row(v) += disp.row(v) / len * std::min(len, temperature);
            pos(v, 0) = std::clamp(pos(v, 0), 0.0, 1.0);
            pos(v, 1) = std::clamp(pos(v, 1), 0.0, 1.0);
        }
    }
    // uniform rescale so the drawing spans the unit square, centred on the short axis
    const RowVector lo = pos.colwise().minCoeff();
    const RowVector extent = pos.colwise().maxCoeff() - lo;
    const double span = extent.maxCoeff();
    if (span > 0.0) {
        for (Index v = 0; v < n; ++v) {
            for (Index c = 0; c < 2; ++c) pos(v, c) = std::clamp((pos(v, c) - lo(c)) / span + 0.5 * (1.0 - extent(c) / span), 0.0, 1.0);
        }
    }
    return pos;
}

}  // namespace asyhplot
