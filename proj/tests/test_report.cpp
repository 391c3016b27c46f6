#include <asyhplot/report/export.hpp>
#include <asyhplot/report/figures.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "xml_check.hpp"

#include <regex>
#include <sstream>

using namespace asyhplot;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t c = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + needle.size())) ++c;
    return c;
}

std::string between(const std::string& text, const std::string& open, const std::string& close) {
    const auto a = text.find(open);
    REQUIRE(a != std::string::npos);
    const auto b = text.find(close, a);
    REQUIRE(b != std::string::npos);
    return text.substr(a, b - a);
}

// Labels that need escaping in XML, DOT and CSV.
AsymmetricDissimilarityMatrix awkward_ranks(Index n, std::uint64_t seed) {
    Random rng(seed);
    Matrix delta = oracle::random_matrix(rng, n, n, 1.0, static_cast<double>(n * n));
    delta = delta.array().round();
    LabelList labels;
    for (Index i = 0; i < n; ++i) labels.push_back("J&" + std::to_string(i) + " <\"q\">, 'x'");
    auto d = AsymmetricDissimilarityMatrix::from_values(delta, labels);
    return d;
}

const report::Provenance prov{"00112233aabbccdd", 42};

io::CsvDocument reparse(const std::string& text) {
    std::istringstream in(text);
    return io::parse_csv(in);
}

void check_meta(const io::CsvDocument& doc) {
    CHECK(doc.meta.at("config_hash") == prov.config_hash);
    CHECK(doc.meta.at("seed") == "42");
}

}  // namespace

TEST_CASE("svg escape and number formatting", "[report]") {
    CHECK(svg::escape("a&b<c>\"d'") == "a&amp;b&lt;c&gt;&quot;d&apos;");
    CHECK(svg::escape(std::string("x\x01y")) == "xy");
    CHECK(svg::num(1.005) == "1.00");
    CHECK(svg::num(-0.001) == "0.00");
    CHECK(svg::num(-2.5) == "-2.50");
    CHECK_THROWS_AS(svg::num(std::nan("")), NumericalError);
}

TEST_CASE("the well-formedness checker rejects broken markup", "[report]") {
    CHECK(xmlcheck::check("<a><b/></a>").empty());
    CHECK_FALSE(xmlcheck::check("<a><b></a>").empty());
    CHECK_FALSE(xmlcheck::check("<a x=1/>").empty());
    CHECK_FALSE(xmlcheck::check("<a>&</a>").empty());
    CHECK_FALSE(xmlcheck::check("<a/><b/>").empty());
    CHECK_FALSE(xmlcheck::check("<a><!-- x -- y --></a>").empty());
    CHECK_FALSE(xmlcheck::check("<a x=\"1\" x=\"2\"/>").empty());
}

TEST_CASE("comments with double hyphens stay well formed", "[report]") {
    svg::Document doc(10, 10);
    doc.comment("a -- b --- c");
    CHECK(xmlcheck::check(doc.str()).empty());
}

TEST_CASE("nice ticks cover the range with round steps", "[report]") {
    Random rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const double lo = rng.uniform(-1000, 1000);
        const double hi = lo + std::pow(10.0, rng.uniform(-3, 3));
        const auto ticks = svg::nice_ticks(lo, hi, 5);
        REQUIRE(ticks.size() >= 2);
        CHECK(ticks.size() <= 12);
        const double step = ticks[1] - ticks[0];
        for (std::size_t t = 0; t < ticks.size(); ++t) {
            CHECK(ticks[t] >= lo - 1e-9 * step);
            CHECK(ticks[t] <= hi + 1e-9 * step);
            if (t > 0) CHECK(ticks[t] - ticks[t - 1] == Catch::Approx(step).epsilon(1e-9));
        }
        const double mantissa = step / std::pow(10.0, std::floor(std::log10(step) + 1e-12));
        CHECK((std::abs(mantissa - 1) < 1e-9 || std::abs(mantissa - 2) < 1e-9 || std::abs(mantissa - 2.5) < 1e-9 ||
               std::abs(mantissa - 5) < 1e-9 || std::abs(mantissa - 10) < 1e-9));
    }
    for (double t : svg::nice_ticks(1, 3, 5, 1.0)) CHECK(t == std::round(t));
    CHECK(svg::nice_ticks(2, 2) == std::vector<double>{2});
}

TEST_CASE("h-plot figure draws both profiles of every object", "[report]") {
    const auto d = awkward_ranks(7, 3);
    const auto emb = hplot_embed(d);
    const auto text = report::hplot_figure(emb, {1, 4});
    INFO(xmlcheck::check(text));
    CHECK(xmlcheck::check(text).empty());
    CHECK(count(between(text, "<g id=\"to-profiles\">", "</g>"), "<circle") == 7);
    CHECK(count(between(text, "<g id=\"from-profiles\">", "</g>"), "<polygon") == 7);
    // Two point labels plus one key entry for each emphasised object.
    CHECK(count(text, "font-weight=\"bold\">2<") == 2);
    CHECK(count(text, "font-weight=\"bold\">5<") == 2);
    CHECK(count(text, "font-weight=\"bold\">3<") == 0);
    CHECK(text.find("J&amp;0 &lt;&quot;q&quot;&gt;") != std::string::npos);
    CHECK(text.find("J&0") == std::string::npos);
}

TEST_CASE("every figure is well formed", "[report]") {
    const auto d = awkward_ranks(8, 11);
    const auto emb = hplot_embed(d);
    const auto data = combine_profiles(emb);
    const auto model = ada_fit(data, 3);
    const auto plot = screeplot(data, 1, 5);

    UnfoldingOptions uo;
    uo.restarts = 3;
    const auto rows = unfolding_fit(d, RoleOrder::RowsAsIndividuals, uo);
    const auto cols = unfolding_fit(d, RoleOrder::ColumnsAsIndividuals, uo);

    auto g = build_network(d, 20);
    g.layout = spring_layout(g, 9);

    for (const auto& text : {report::hplot_figure(emb, model.archetypoids), report::screeplot_figure(plot),
                             report::ternary_figure(model, data.labels), report::unfolding_figure(rows, cols), report::network_figure(g)}) {
        INFO(text.substr(0, 200));
        CHECK(xmlcheck::check(text).empty());
        CHECK(text.find("nan") == std::string::npos);
    }
}

TEST_CASE("figure preconditions", "[report]") {
    const auto d = awkward_ranks(6, 2);
    const auto data = combine_profiles(hplot_embed(d));
    CHECK_THROWS_AS(report::ternary_figure(ada_fit(data, 2), data.labels), InputError);
    CHECK_THROWS_AS(report::network_figure(build_network(d, 10)), InputError);
}

TEST_CASE("network figure marks detached nodes", "[report]") {
    Matrix delta(3, 3);
    delta << 1, 2, 9, 3, 1, 9, 9, 9, 9;
    auto g = build_network(AsymmetricDissimilarityMatrix::from_values(delta), 3);
    g.layout = spring_layout(g, 1);
    const auto text = report::network_figure(g);
    CHECK(xmlcheck::check(text).empty());
    CHECK(count(text, "fill=\"white\" stroke=") >= 1);
}

TEST_CASE("CSV exports carry provenance and round-trip", "[report]") {
    const auto d = awkward_ranks(6, 8);
    const auto emb = hplot_embed(d);

    std::ostringstream embedding;
    report::write_embedding_csv(embedding, emb, prov);
    const auto e = reparse(embedding.str());
    check_meta(e);
    CHECK(std::stod(e.meta.at("gof")) == Catch::Approx(emb.gof).epsilon(1e-12));
    REQUIRE(e.rows.size() == 13);
    CHECK(e.rows[0] == std::vector<std::string>{"label", "role", "x", "y"});
    for (Index r = 0; r < 12; ++r) {
        const auto& row = e.rows[static_cast<std::size_t>(r + 1)];
        CHECK(row[0] == d.labels[static_cast<std::size_t>(r % 6)]);
        CHECK(row[1] == (r < 6 ? "to" : "from"));
        CHECK(std::stod(row[2]) == Catch::Approx(emb.coords(r, 0)).epsilon(1e-12).margin(1e-300));
        CHECK(std::stod(row[3]) == Catch::Approx(emb.coords(r, 1)).epsilon(1e-12).margin(1e-300));
    }

    std::ostringstream asym;
    report::write_asymmetry_csv(asym, asymmetry_scores(emb), prov);
    const auto a = reparse(asym.str());
    check_meta(a);
    REQUIRE(a.rows.size() == 7);
    for (std::size_t r = 2; r < a.rows.size(); ++r) CHECK(std::stod(a.rows[r][3]) <= std::stod(a.rows[r - 1][3]));

    const auto data = combine_profiles(emb);
    std::ostringstream profiles;
    report::write_profiles_csv(profiles, data, prov);
    const auto p = reparse(profiles.str());
    check_meta(p);
    CHECK(p.rows.size() == 7);
    CHECK(p.rows[1].size() == 5);

    const auto plot = screeplot(data, 1, 4);
    std::ostringstream scree;
    report::write_screeplot_csv(scree, plot, prov);
    const auto s = reparse(scree.str());
    check_meta(s);
    CHECK(s.rows.size() == 5);
    if (plot.elbow) CHECK(s.meta.at("suggested_elbow") == std::to_string(*plot.elbow));

    const auto clusters = kmedoids_silhouette(data, 2, 4);
    std::ostringstream sil;
    report::write_silhouette_csv(sil, clusters, prov);
    const auto si = reparse(sil.str());
    check_meta(si);
    CHECK(si.rows[0] == std::vector<std::string>{"k", "average_silhouette"});
    CHECK(si.rows.size() == 4);

    UnfoldingOptions uo;
    uo.restarts = 2;
    const auto rows = unfolding_fit(d, RoleOrder::RowsAsIndividuals, uo);
    const auto cols = unfolding_fit(d, RoleOrder::ColumnsAsIndividuals, uo);
    std::ostringstream unf;
    report::write_unfolding_csv(unf, {&rows, &cols}, prov);
    const auto u = reparse(unf.str());
    check_meta(u);
    CHECK(u.rows.size() == 1 + 2 * 12);
    CHECK(std::stod(u.meta.at("stress_rows_as_individuals")) == Catch::Approx(rows.stress).epsilon(1e-12));
}

TEST_CASE("model JSON lists archetypoids and weights", "[report]") {
    const auto d = awkward_ranks(7, 4);
    const auto data = combine_profiles(hplot_embed(d));
    const auto model = ada_fit(data, 3);
    const auto j = nlohmann::json::parse(report::dump(report::model_json(model, data.labels, prov)));
    CHECK(j.at("meta").at("config_hash") == prov.config_hash);
    CHECK(j.at("meta").at("seed") == 42);
    CHECK(j.at("k") == 3);
    const auto indices = j.at("archetypoid_indices").get<std::vector<Index>>();
    CHECK(indices == model.archetypoids);
    for (std::size_t t = 0; t < indices.size(); ++t)
        CHECK(j.at("archetypoid_labels")[t] == data.labels[static_cast<std::size_t>(indices[t])]);
    REQUIRE(j.at("alpha").size() == 7);
    for (const auto& row : j.at("alpha")) {
        double sum = 0;
        for (double v : row) sum += v;
        CHECK(sum == Catch::Approx(1.0).margin(1e-9));
    }
    CHECK(j.at("rss").get<double>() == Catch::Approx(model.rss).epsilon(1e-15));
    CHECK(j.contains("trace"));
    CHECK(j.contains("iteration_capped"));
}

TEST_CASE("graph exports agree with the graph", "[report]") {
    const auto d = awkward_ranks(6, 13);
    auto g = build_network(d, 12);
    g.layout = spring_layout(g, 2);

    const auto j = report::graph_json(g, prov);
    CHECK(j.at("edges").size() == g.edges.size());
    CHECK(j.at("detached").size() == detached_nodes(g).size());
    CHECK(j.at("layout").size() == 6);
    CHECK(j.at("meta").at("seed") == 42);

    std::ostringstream dot;
    report::write_graph_dot(dot, g, prov);
    const auto text = dot.str();
    CHECK(text.rfind("// config_hash=00112233aabbccdd\n// seed=42\n", 0) == 0);
    const std::regex edge(R"(n(\d+) -> n(\d+) \[)");
    std::size_t edges = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), edge); it != std::sregex_iterator(); ++it) {
        const Index from = std::stoi((*it)[1]) - 1, to = std::stoi((*it)[2]) - 1;
        CHECK(d.delta(from, to) <= 12);
        ++edges;
    }
    CHECK(edges == g.edges.size());
    CHECK(text.find("label=\"J&0 <\\\"q\\\">, 'x'\"") != std::string::npos);
}

TEST_CASE("ingest summary lists undefined cells", "[report]") {
    Matrix delta(3, 3);
    delta << 1, 2, 5, 3, 1, 2, 5, 4, 1;
    AsymmetricDissimilarityMatrix d;
    d.delta = delta;
    d.max_rank = 4;
    d.labels = {"a", "b", "c"};
    const auto j = report::ingest_summary_json(d, prov);
    CHECK(j.at("objects") == 3);
    CHECK(j.at("undefined_cells") == 2);
    REQUIRE(j.at("undefined").size() == 2);
    CHECK(j.at("undefined")[0].at("row_label") == "a");
    CHECK(j.at("undefined")[0].at("column_label") == "c");
}
