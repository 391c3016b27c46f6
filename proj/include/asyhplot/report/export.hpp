#pragma once

// Tabular and structured exports. Every numeric artifact carries the run's
// config hash and seed: CSV as leading "# key=value" lines, JSON under "meta".

#include "asyhplot/archetypoids.hpp"
#include "asyhplot/comparators/kmedoids.hpp"
#include "asyhplot/comparators/network.hpp"
#include "asyhplot/comparators/unfolding.hpp"
#include "asyhplot/data_ingest.hpp"
#include "asyhplot/hplot.hpp"
#include "asyhplot/io/csv.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <ostream>
#include <string>

namespace asyhplot::report {

struct Provenance {
    std::string config_hash;
    std::uint64_t seed = 0;

    std::map<std::string, std::string> meta() const { return {{"config_hash", config_hash}, {"seed", std::to_string(seed)}}; }
    nlohmann::json json() const { return {{"config_hash", config_hash}, {"seed", seed}}; }
};

namespace detail {

inline nlohmann::json matrix_json(const Matrix& m) {
    auto rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string label_at(const LabelList& labels, Index i) {
    return i < static_cast<Index>(labels.size()) ? labels[static_cast<std::size_t>(i)] : std::to_string(i + 1);
}

}  // namespace detail

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Rank matrix summary written next to the dissimilarity CSV.
inline nlohmann::json ingest_summary_json(const AsymmetricDissimilarityMatrix& d, const Provenance& prov) {
    const auto s = summarize_ranks(d);
    auto undefined = nlohmann::json::array();
    for (const auto& [i, j] : s.undefined)
        undefined.push_back({{"row", i}, {"column", j}, {"row_label", detail::label_at(d.labels, i)}, {"column_label", detail::label_at(d.labels, j)}});
    return {{"meta", prov.json()},
            {"objects", d.size()},
            {"max_rank", s.max_rank},
            {"sentinel", s.sentinel},
            {"defined_cells", s.defined_cells},
            {"undefined_cells", s.undefined_cells},
            {"tie_groups", s.tie_groups},
            {"tied_cells", s.tied_cells},
            {"undefined", std::move(undefined)}};
}

/// label, role, x, y[, x3, ...] with one row per profile.
inline void write_embedding_csv(std::ostream& out, const HPlotEmbedding& emb, const Provenance& prov) {
    auto meta = prov.meta();
    meta["gof"] = io::format_number(emb.gof);
    io::write_meta(out, meta);
    std::vector<std::string> header{"label", "role", "x", "y"};
    for (Index c = 2; c < emb.dimension(); ++c) header.push_back("x" + std::to_string(c + 1));
    io::write_row(out, header);
    const Index n = emb.objects();
    for (Index r = 0; r < 2 * n; ++r) {
        std::vector<std::string> row{detail::label_at(emb.labels, r % n), r < n ? "to" : "from"};
        for (Index c = 0; c < emb.dimension(); ++c) row.push_back(io::format_number(emb.coords(r, c)));
        io::write_row(out, row);
    }
}

inline nlohmann::json embedding_json(const HPlotEmbedding& emb, const Provenance& prov) {
    std::vector<double> spectrum(emb.eigenvalues.data(), emb.eigenvalues.data() + emb.eigenvalues.size());
    return {{"meta", prov.json()}, {"dimension", emb.dimension()}, {"gof", emb.gof}, {"spectrum", spectrum}, {"labels", emb.labels}};
}

inline void write_asymmetry_csv(std::ostream& out, const AsymmetryReport& report, const Provenance& prov) {
    io::write_meta(out, prov.meta());
    io::write_row(out, {"rank", "number", "label", "score"});
    for (std::size_t r = 0; r < report.size(); ++r)
        io::write_row(out, {std::to_string(r + 1), std::to_string(report[r].index + 1), report[r].label, io::format_number(report[r].score)});
}

/// The n x 4 table archetypoids are fitted on.
inline void write_profiles_csv(std::ostream& out, const DataMatrix& data, const Provenance& prov) {
    io::write_meta(out, prov.meta());
    io::write_row(out, {"label", "to_x", "to_y", "from_x", "from_y"});
    for (Index i = 0; i < data.rows(); ++i) {
        std::vector<std::string> row{detail::label_at(data.labels, i)};
        for (Index c = 0; c < data.cols(); ++c) row.push_back(io::format_number(data.x(i, c)));
        io::write_row(out, row);
    }
}

/// Archetypoid indices are 0-based rows of the input; labels give the names.
inline nlohmann::json model_json(const AdaModel& model, const LabelList& labels, const Provenance& prov) {
    std::vector<std::string> names;
    for (Index idx : model.archetypoids) names.push_back(detail::label_at(labels, idx));
    return {{"meta", prov.json()},
            {"k", model.k()},
            {"archetypoid_labels", names},
            {"archetypoid_indices", model.archetypoids},
            {"alpha", detail::matrix_json(model.alpha)},
            {"rss", model.rss},
            {"trace", model.trace},
            {"swaps", model.swaps},
            {"iteration_capped", model.iteration_capped}};
}

inline void write_screeplot_csv(std::ostream& out, const Screeplot& plot, const Provenance& prov) {
    auto meta = prov.meta();
    if (plot.elbow) meta["suggested_elbow"] = std::to_string(*plot.elbow);
    io::write_meta(out, meta);
    io::write_row(out, {"k", "rss", "envelope", "archetypoids"});
    for (const auto& p : plot.points) {
        std::string members;
        for (std::size_t t = 0; t < p.archetypoids.size(); ++t) members += (t ? " " : "") + std::to_string(p.archetypoids[t] + 1);
        io::write_row(out, {std::to_string(p.k), io::format_number(p.rss), io::format_number(p.envelope), members});
    }
}

inline std::string role_name(RoleOrder role) {
    return role == RoleOrder::RowsAsIndividuals ? "rows_as_individuals" : "columns_as_individuals";
}

/// Both role orders in one table: solution, role (individual/object), label, x, y.
inline void write_unfolding_csv(std::ostream& out, const std::vector<const UnfoldingSolution*>& solutions, const Provenance& prov) {
    auto meta = prov.meta();
    for (const auto* sol : solutions) meta["stress_" + role_name(sol->role)] = io::format_number(sol->stress);
    io::write_meta(out, meta);
    io::write_row(out, {"solution", "role", "label", "x", "y"});
    for (const auto* sol : solutions) {
        for (const auto& [role, m] : {std::pair<const char*, const Matrix*>{"individual", &sol->x1}, {"object", &sol->x2}}) {
            for (Index r = 0; r < m->rows(); ++r)
                io::write_row(out, {role_name(sol->role), role, detail::label_at(sol->labels, r), io::format_number((*m)(r, 0)),
                                    io::format_number(m->cols() > 1 ? (*m)(r, 1) : 0.0)});
        }
    }
}

inline nlohmann::json unfolding_json(const UnfoldingSolution& sol) {
    auto runs = nlohmann::json::array();
    for (const auto& run : sol.runs) runs.push_back({{"initial_stress", run.trace.front()}, {"final_stress", run.trace.back()},
                                                    {"iterations", run.trace.size() - 1}, {"converged", run.converged}});
    return {{"role_order", role_name(sol.role)}, {"stress", sol.stress}, {"restarts_used", sol.restarts_used},
            {"converged", sol.converged}, {"runs", std::move(runs)}};
}

inline nlohmann::json graph_json(const CitationGraph& g, const Provenance& prov) {
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"dissimilarity", e.dissimilarity}, {"weight", e.weight}});
    auto detached = nlohmann::json::array();
    for (Index v : detached_nodes(g)) detached.push_back({{"index", v}, {"label", detail::label_at(g.labels, v)}});
    nlohmann::json out{{"meta", prov.json()}, {"threshold", g.threshold}, {"labels", g.labels}, {"edges", std::move(edges)},
                       {"detached", std::move(detached)}};
    if (g.layout.rows() == g.nodes()) out["layout"] = detail::matrix_json(g.layout);
    return out;
}

inline void write_graph_dot(std::ostream& out, const CitationGraph& g, const Provenance& prov) {
    const auto quoted = [](const std::string& s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') q.push_back('\\');
            q.push_back(c);
        }
        return q + "\"";
    };
    out << "// config_hash=" << prov.config_hash << "\n// seed=" << prov.seed << "\n";
    out << "digraph citations {\n  graph [threshold=" << quoted(io::format_number(g.threshold)) << "];\n";
    for (Index v = 0; v < g.nodes(); ++v) {
        out << "  n" << v + 1 << " [label=" << quoted(detail::label_at(g.labels, v));
        if (g.layout.rows() == g.nodes()) out << ", pos=" << quoted(io::format_number(g.layout(v, 0)) + "," + io::format_number(g.layout(v, 1)));
        out << "];\n";
    }
    for (const auto& e : g.edges)
        out << "  n" << e.from + 1 << " -> n" << e.to + 1 << " [weight=" << io::format_number(e.weight)
            << ", dissimilarity=" << io::format_number(e.dissimilarity) << "];\n";
    out << "}\n";
}

/// k, average_silhouette; clusterings with a zero silhouette denominator are listed in the header.
inline void write_silhouette_csv(std::ostream& out, const std::vector<MedoidClustering>& results, const Provenance& prov) {
    auto meta = prov.meta();
    std::string degenerate;
    for (const auto& c : results)
        if (c.degenerate) degenerate += (degenerate.empty() ? "" : " ") + std::to_string(c.k);
    if (!degenerate.empty()) meta["degenerate_k"] = degenerate;
    io::write_meta(out, meta);
    io::write_row(out, {"k", "average_silhouette"});
    for (const auto& c : results) io::write_row(out, {std::to_string(c.k), io::format_number(c.average_silhouette)});
}

}  // namespace asyhplot::report
