#pragma once

// Static SVG renderings of the analysis results. Objects are drawn with their
// 1-based number; a key maps numbers to labels.

#include "asyhplot/archetypoids.hpp"
#include "asyhplot/comparators/network.hpp"
#include "asyhplot/comparators/unfolding.hpp"
#include "asyhplot/hplot.hpp"
#include "asyhplot/report/svg.hpp"

#include <set>
#include <string>
#include <vector>

namespace asyhplot::report {

namespace detail {

inline constexpr const char* kToColor = "#1f5fa8";
inline constexpr const char* kFromColor = "#c0392b";

inline std::string number_of(Index i) { return std::to_string(i + 1); }

inline void draw_key(svg::Document& doc, double left, double top, const LabelList& labels, const std::set<Index>& bold = {}) {
    svg::TextStyle style;
    style.size = 8.5;
    const double step = std::min(12.0, (doc.height() - top - 10) / std::max<double>(1.0, static_cast<double>(labels.size())));
    style.size = std::min(8.5, step * 0.85);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        style.bold = bold.count(static_cast<Index>(i)) > 0;
        doc.text(left, top + step * static_cast<double>(i), number_of(static_cast<Index>(i)) + "  " + labels[i], style);
    }
}

inline std::vector<std::pair<double, double>> triangle(double cx, double cy, double r) {
    return {{cx, cy - r}, {cx - 0.87 * r, cy + 0.5 * r}, {cx + 0.87 * r, cy + 0.5 * r}};
}

}  // namespace detail

/// Both profiles of every object in the first two h-plot dimensions. `bold`
/// lists objects (archetypoids) whose numbers are emphasised.
inline std::string hplot_figure(const HPlotEmbedding& emb, const std::vector<Index>& bold = {}) {
    if (emb.dimension() < 2) throw InputError("hplot_figure: needs at least two dimensions");
    const Index n = emb.objects();
    const std::set<Index> emphasised(bold.begin(), bold.end());
    svg::Document doc(860, 560);
    std::vector<double> xs, ys;
    for (Index r = 0; r < 2 * n; ++r) {
        xs.push_back(emb.coords(r, 0));
        ys.push_back(emb.coords(r, 1));
    }
    const auto frame = svg::Frame::around(60, 40, 520, 460, xs, ys, true);
    frame.draw_axes(doc, "Dimension 1", "Dimension 2");

    char title[96];
    std::snprintf(title, sizeof title, "h-plot of dissimilarity profiles (goodness of fit %.3f)", emb.gof);
    doc.text(60, 24, title, {13, true});

    for (Index j = 0; j < n; ++j) {
        doc.line(frame.px(emb.coords(j, 0)), frame.py(emb.coords(j, 1)), frame.px(emb.coords(n + j, 0)), frame.py(emb.coords(n + j, 1)),
                 {"none", "#bbbbbb", 0.6});
    }
    doc.begin_group("to-profiles");
    for (Index j = 0; j < n; ++j) doc.circle(frame.px(emb.coords(j, 0)), frame.py(emb.coords(j, 1)), 4, {detail::kToColor, "white", 0.6});
    doc.end_group();
    doc.begin_group("from-profiles");
    for (Index j = 0; j < n; ++j)
        doc.polygon(detail::triangle(frame.px(emb.coords(n + j, 0)), frame.py(emb.coords(n + j, 1)), 5), {detail::kFromColor, "white", 0.6});
    doc.end_group();

    svg::TextStyle label;
    label.size = 9;
    for (Index r = 0; r < 2 * n; ++r) {
        const Index j = r % n;
        label.bold = emphasised.count(j) > 0;
        label.size = label.bold ? 11 : 9;
        label.fill = r < n ? detail::kToColor : detail::kFromColor;
        doc.text(frame.px(emb.coords(r, 0)) + 5, frame.py(emb.coords(r, 1)) - 5, detail::number_of(j), label);
    }

    doc.circle(600, 46, 4, {detail::kToColor, "white", 0.6});
    doc.text(610, 50, "cited (to) profile", {10});
    doc.polygon(detail::triangle(600, 64, 5), {detail::kFromColor, "white", 0.6});
    doc.text(610, 68, "citing (from) profile", {10});
    detail::draw_key(doc, 596, 92, emb.labels, emphasised);
    return doc.str();
}

inline std::string screeplot_figure(const Screeplot& plot) {
    if (plot.points.empty()) throw InputError("screeplot_figure: no points");
    svg::Document doc(560, 400);
    std::vector<double> ks, rss;
    for (const auto& p : plot.points) {
        ks.push_back(static_cast<double>(p.k));
        rss.push_back(p.rss);
    }
    const auto frame = svg::Frame::around(70, 40, 450, 300, ks, rss);
    frame.draw_axes(doc, "number of archetypoids k", "RSS", true);
    doc.text(70, 24, "Screeplot", {13, true});

    std::vector<std::pair<double, double>> path;
    for (const auto& p : plot.points) path.emplace_back(frame.px(static_cast<double>(p.k)), frame.py(p.rss));
    doc.polyline(path, {"none", "#333333", 1.4});
    for (const auto& p : plot.points) {
        const bool elbow = plot.elbow && *plot.elbow == p.k;
        doc.circle(frame.px(static_cast<double>(p.k)), frame.py(p.rss), elbow ? 5.5 : 3.5, {elbow ? detail::kFromColor : "#333333"});
    }
    if (plot.elbow) {
        for (const auto& p : plot.points) {
            if (p.k != *plot.elbow) continue;
            doc.text(frame.px(static_cast<double>(p.k)) + 8, frame.py(p.rss) - 8, "suggested elbow k = " + std::to_string(p.k),
                     {10, false, svg::Anchor::Start, detail::kFromColor});
        }
    }
    return doc.str();
}

/// Every observation at its barycentric alpha coordinates over three archetypoids.
inline std::string ternary_figure(const AdaModel& model, const LabelList& labels) {
    if (model.k() != 3) throw InputError("ternary_figure: needs k = 3, got k = " + std::to_string(model.k()));
    svg::Document doc(760, 560);
    const double side = 440, left = 60, base = 500;
    const double h = side * std::sqrt(3.0) / 2;
    const std::pair<double, double> v[3] = {{left, base}, {left + side, base}, {left + side / 2, base - h}};
    doc.text(60, 24, "Mixture weights over three archetypoids", {13, true});
    doc.polygon({v[0], v[1], v[2]}, {"#fafafa", "#444444", 1.2});
    for (int t = 1; t < 5; ++t) {
        const double f = t / 5.0;
        for (int a = 0; a < 3; ++a) {
            const auto& p = v[a];
            const auto& q = v[(a + 1) % 3];
            const auto& r = v[(a + 2) % 3];
            // line of constant weight on vertex r
            doc.line(r.first + (p.first - r.first) * f, r.second + (p.second - r.second) * f, r.first + (q.first - r.first) * f,
                     r.second + (q.second - r.second) * f, {"none", "#e2e2e2", 0.7});
        }
    }
    svg::TextStyle corner;
    corner.size = 11;
    corner.bold = true;
    corner.anchor = svg::Anchor::Middle;
    const double offsets[3][2] = {{-6, 18}, {6, 18}, {0, -10}};
    for (int a = 0; a < 3; ++a) {
        const Index idx = model.archetypoids[static_cast<std::size_t>(a)];
        doc.text(v[a].first + offsets[a][0], v[a].second + offsets[a][1],
                 "archetypoid " + std::to_string(a + 1) + " (" + detail::number_of(idx) + ")", corner);
    }
    const std::set<Index> arche(model.archetypoids.begin(), model.archetypoids.end());
    svg::TextStyle label;
    label.size = 9;
    for (Index i = 0; i < model.alpha.rows(); ++i) {
        double x = 0, y = 0;
        for (int a = 0; a < 3; ++a) {
            x += model.alpha(i, a) * v[a].first;
            y += model.alpha(i, a) * v[a].second;
        }
        const bool is_arche = arche.count(i) > 0;
        doc.circle(x, y, is_arche ? 5 : 3.5, {is_arche ? detail::kFromColor : detail::kToColor, "white", 0.5, 0.85});
        label.bold = is_arche;
        doc.text(x + 5, y - 4, detail::number_of(i), label);
    }
    detail::draw_key(doc, 540, 60, labels, arche);
    return doc.str();
}

/// Two panels, one per role order: individuals as circles, objects as triangles.
inline std::string unfolding_figure(const UnfoldingSolution& first, const UnfoldingSolution& second) {
    svg::Document doc(1000, 520);
    const UnfoldingSolution* panels[2] = {&first, &second};
    for (int p = 0; p < 2; ++p) {
        const auto& sol = *panels[p];
        std::vector<double> xs, ys;
        for (const Matrix* m : {&sol.x1, &sol.x2}) {
            for (Index r = 0; r < m->rows(); ++r) {
                xs.push_back((*m)(r, 0));
                ys.push_back(m->cols() > 1 ? (*m)(r, 1) : 0.0);
            }
        }
        const double left = 60 + 490 * p;
        const auto frame = svg::Frame::around(left, 50, 420, 420, xs, ys, true);
        frame.draw_axes(doc, "", "");
        const bool rows = sol.role == RoleOrder::RowsAsIndividuals;
        char title[128];
        std::snprintf(title, sizeof title, "%s as individuals (stress %.4g)", rows ? "citing" : "cited", sol.stress);
        doc.text(left, 36, title, {12, true});
        svg::TextStyle label;
        label.size = 8.5;
        for (Index r = 0; r < sol.x1.rows(); ++r) {
            const double x = frame.px(sol.x1(r, 0)), y = frame.py(sol.x1.cols() > 1 ? sol.x1(r, 1) : 0.0);
            doc.circle(x, y, 3.5, {detail::kToColor});
            label.fill = detail::kToColor;
            doc.text(x + 4, y - 4, detail::number_of(r), label);
        }
        for (Index r = 0; r < sol.x2.rows(); ++r) {
            const double x = frame.px(sol.x2(r, 0)), y = frame.py(sol.x2.cols() > 1 ? sol.x2(r, 1) : 0.0);
            doc.polygon(detail::triangle(x, y, 4.5), {detail::kFromColor});
            label.fill = detail::kFromColor;
            doc.text(x + 4, y + 10, detail::number_of(r), label);
        }
    }
    doc.circle(70, 498, 3.5, {detail::kToColor});
    doc.text(80, 502, "individuals (row set)", {10});
    doc.polygon(detail::triangle(250, 498, 4.5), {detail::kFromColor});
    doc.text(260, 502, "objects (column set)", {10});
    return doc.str();
}

/// Directed graph drawn at its layout positions; detached nodes are hollow.
inline std::string network_figure(const CitationGraph& g) {
    const Index n = g.nodes();
    if (g.layout.rows() != n || g.layout.cols() != 2) throw InputError("network_figure: graph has no layout");
    svg::Document doc(820, 620);
    doc.arrow_marker("arrow", "#7f8c8d");
    char title[96];
    std::snprintf(title, sizeof title, "Citation network, links with dissimilarity <= %g", g.threshold);
    doc.text(40, 26, title, {13, true});
    const svg::Frame frame(40, 50, 540, 540, -0.04, 1.04, -0.04, 1.04);
    const auto detached_list = detached_nodes(g);
    const std::set<Index> detached(detached_list.begin(), detached_list.end());
    const double radius = 9;
    for (const auto& e : g.edges) {
        if (e.from == e.to) continue;
        const double x1 = frame.px(g.layout(e.from, 0)), y1 = frame.py(g.layout(e.from, 1));
        const double x2 = frame.px(g.layout(e.to, 0)), y2 = frame.py(g.layout(e.to, 1));
        const double len = std::hypot(x2 - x1, y2 - y1);
        if (len <= 2 * radius) continue;
        const double ux = (x2 - x1) / len, uy = (y2 - y1) / len;
        doc.line(x1 + ux * radius, y1 + uy * radius, x2 - ux * radius, y2 - uy * radius, {"none", "#7f8c8d", 0.8, 0.7}, "arrow");
    }
    svg::TextStyle label;
    label.size = 9;
    label.anchor = svg::Anchor::Middle;
    for (Index v = 0; v < n; ++v) {
        const double x = frame.px(g.layout(v, 0)), y = frame.py(g.layout(v, 1));
        const bool alone = detached.count(v) > 0;
        doc.circle(x, y, radius, alone ? svg::Style{"white", detail::kFromColor, 1.4} : svg::Style{"#d6e4f5", detail::kToColor, 1.2});
        doc.text(x, y + 3, detail::number_of(v), label);
    }
    detail::draw_key(doc, 600, 60, g.labels, {});
    return doc.str();
}

}  // namespace asyhplot::report
