#include <asyhplot/archetypoids.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

#include <cmath>

using namespace asyhplot;
using Catch::Approx;

namespace {

DataMatrix random_rows(Random& rng, Index n, Index m) { return DataMatrix::from(oracle::random_matrix(rng, n, m, -5, 5)); }

// RSS recomputed from alpha and the selected rows, independent of the fit path.
double recompute_rss(const DataMatrix& data, const AdaModel& model) {
    double rss = 0;
    for (Index i = 0; i < data.rows(); ++i) {
        Vector approx = Vector::Zero(data.cols());
        for (Index j = 0; j < model.k(); ++j) approx += model.alpha(i, j) * data.x.row(model.archetypoids[static_cast<std::size_t>(j)]).transpose();
        rss += (data.x.row(i).transpose() - approx).squaredNorm();
    }
    return rss;
}

void check_feasible(const DataMatrix& data, const AdaModel& model) {
    REQUIRE(model.alpha.rows() == data.rows());
    REQUIRE(model.alpha.cols() == model.k());
    for (Index i = 0; i < data.rows(); ++i) {
        CHECK(std::abs(model.alpha.row(i).sum() - 1.0) <= 1e-9);
        CHECK(model.alpha.row(i).minCoeff() >= -1e-12);
    }
    for (Index j = 0; j < model.k(); ++j) {
        const Index row = model.archetypoids[static_cast<std::size_t>(j)];
        CHECK((model.alpha.row(row) - RowVector::Unit(model.k(), j)).cwiseAbs().maxCoeff() <= 1e-6);
    }
    const double again = recompute_rss(data, model);
    CHECK(std::abs(model.rss - again) <= 1e-8 * std::max(1.0, again));
    for (std::size_t t = 1; t < model.trace.size(); ++t) CHECK(model.trace[t] <= model.trace[t - 1]);
}

bool same_rss(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("combine_profiles joins the two profiles of each object", "[archetypoids]") {
    HPlotEmbedding emb;
    emb.coords = Matrix(6, 2);
    emb.coords << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12;
    emb.labels = {"a", "b", "c"};
    const auto x = combine_profiles(emb);
    REQUIRE(x.rows() == 3);
    REQUIRE(x.cols() == 4);
    CHECK(x.x.row(0) == (RowVector(4) << 1, 2, 7, 8).finished());
    CHECK(x.x.row(2) == (RowVector(4) << 5, 6, 11, 12).finished());
    CHECK(x.labels == emb.labels);

    Random rng(1);
    const Matrix a = oracle::random_matrix(rng, 5, 5, 1, 9);
    const auto sym = combine_profiles(hplot_embed(AsymmetricDissimilarityMatrix::from_values(a + a.transpose())));
    CHECK(sym.x.leftCols(2) == sym.x.rightCols(2));

    emb.coords = Matrix::Zero(6, 3);
    CHECK_THROWS_AS(combine_profiles(emb), InputError);
}

TEST_CASE("k = 1 picks the squared-distance medoid", "[archetypoids]") {
    Random rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = random_rows(rng, 9, 3);
        Index expected = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < data.rows(); ++j) {
            double s = 0;
            for (Index i = 0; i < data.rows(); ++i) s += (data.x.row(i) - data.x.row(j)).squaredNorm();
            if (s < best) {
                best = s;
                expected = j;
            }
        }
        CHECK(ada_build(data, 1) == std::vector<Index>{expected});
        const auto model = ada_fit(data, 1);
        CHECK(model.archetypoids == std::vector<Index>{expected});
        CHECK(model.rss == Approx(best).epsilon(1e-12));
        check_feasible(data, model);
    }
}

TEST_CASE("BUILD never beats the exhaustive optimum", "[archetypoids][oracle]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Random rng(1000 + seed);
        const auto data = random_rows(rng, 10, 2);
        for (Index k = 2; k <= 3; ++k) {
            const double build = solve_alpha(data, ada_build(data, k)).rss;
            const double best = ada_exhaustive(data, k).rss;
            CHECK(build >= best - 1e-9 * std::max(1.0, best));
        }
    }
}

TEST_CASE("SWAP from BUILD reaches the exhaustive optimum on most instances", "[archetypoids][oracle]") {
    int matches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Random rng(5000 + seed);
        const auto data = random_rows(rng, 12, 2);
        const auto fitted = ada_fit(data, 2);
        const auto best = ada_exhaustive(data, 2);
        check_feasible(data, fitted);
        check_feasible(data, best);
        CHECK(fitted.rss >= best.rss - 1e-9 * std::max(1.0, best.rss));
        CHECK(fitted.rss <= fitted.trace.front());
        if (same_rss(fitted.rss, best.rss)) ++matches;
    }
    CHECK(matches >= 45);
}

TEST_CASE("one SWAP run from the BUILD set reaches the optimum for k = 2", "[archetypoids][oracle]") {
    int matches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Random rng(7000 + seed);
        const auto data = random_rows(rng, 12, 2);
        const auto model = ada_swap(data, ada_build(data, 2));
        const auto best = ada_exhaustive(data, 2);
        CHECK(model.rss >= best.rss - 1e-9 * std::max(1.0, best.rss));
        if (same_rss(model.rss, best.rss)) ++matches;
    }
    CHECK(matches >= 45);
}

TEST_CASE("fit dominates every single greedy start", "[archetypoids]") {
    Random rng(91);
    const auto data = random_rows(rng, 12, 3);
    const auto fitted = ada_fit(data, 3);
    CHECK(fitted.rss <= solve_alpha(data, ada_build(data, 3)).rss);
    for (Index first = 0; first < data.rows(); ++first) {
        const auto single = ada_swap(data, ada_build_from(data, 3, first));
        CHECK(fitted.rss <= single.rss + 1e-10 * single.rss);
    }
    CHECK(ada_build_from(data, 3, 4).front() == 4);
    CHECK_THROWS_AS(ada_build_from(data, 3, 12), InputError);
}

TEST_CASE("SWAP started at the optimum performs no swaps", "[archetypoids]") {
    Random rng(88);
    const auto data = random_rows(rng, 11, 3);
    const auto best = ada_exhaustive(data, 3);
    const auto model = ada_swap(data, best.archetypoids);
    CHECK(model.swaps == 0);
    CHECK(model.archetypoids == best.archetypoids);
    CHECK_FALSE(model.iteration_capped);
}

TEST_CASE("SWAP reports an iteration cap", "[archetypoids]") {
    Random rng(89);
    const auto data = random_rows(rng, 12, 2);
    const auto best = ada_exhaustive(data, 3);
    // start as far from the optimum as possible and allow a single pass
    std::vector<Index> start;
    for (Index c = 0; c < data.rows() && start.size() < 3; ++c)
        if (std::find(best.archetypoids.begin(), best.archetypoids.end(), c) == best.archetypoids.end()) start.push_back(c);
    AdaOptions options;
    options.max_iter = 1;
    const auto model = ada_swap(data, start, options);
    if (model.swaps == 1 && !same_rss(model.rss, best.rss)) CHECK(model.iteration_capped);
    check_feasible(data, model);
}

TEST_CASE("exhaustive enumeration", "[archetypoids]") {
    Random rng(4);
    const auto data = random_rows(rng, 6, 2);
    const auto model = ada_exhaustive(data, 2);
    CHECK(model.subsets_evaluated == 15);
    check_feasible(data, model);

    const auto all = ada_exhaustive(data, 6);
    CHECK(all.rss == Approx(0.0).margin(1e-24));

    double previous = std::numeric_limits<double>::infinity();
    for (Index k = 1; k <= 6; ++k) {
        const double r = ada_exhaustive(data, k).rss;
        CHECK(r <= previous + 1e-12);
        previous = r;
    }

    const auto big = DataMatrix::from(oracle::random_matrix(rng, 60, 2));
    try {
        ada_exhaustive(big, 10, 1000);
        FAIL("expected the budget guard to trigger");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("budget of 1000") != std::string::npos);
    }
    CHECK(combinations_capped(25, 3, 1'000'000) == 2300);
}

TEST_CASE("fitted models are invariant to rigid motions", "[archetypoids][property]") {
    Random rng(61);
    for (int trial = 0; trial < 5; ++trial) {
        const auto data = random_rows(rng, 10, 2);
        const double angle = rng.uniform(0, 6.283185307179586);
        Eigen::Matrix2d rot;
        rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
        Matrix moved = data.x * rot.transpose();
        moved.rowwise() += RowVector::Constant(2, rng.uniform(-100, 100));
        const auto a = ada_fit(data, 3);
        const auto b = ada_fit(DataMatrix::from(moved), 3);
        CHECK(a.archetypoids == b.archetypoids);
        CHECK((a.alpha - b.alpha).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(a.rss == Approx(b.rss).epsilon(1e-8));
    }
}

TEST_CASE("fits are deterministic", "[archetypoids][property]") {
    Random rng(62);
    const auto data = random_rows(rng, 15, 4);
    const auto a = ada_fit(data, 4);
    const auto b = ada_fit(data, 4);
    CHECK(a.archetypoids == b.archetypoids);
    CHECK(a.alpha == b.alpha);
    CHECK(a.rss == b.rss);
    CHECK(a.trace == b.trace);
}

TEST_CASE("screeplot and elbow suggestion", "[archetypoids]") {
    SECTION("elbow rule picks the middle of the sharpest bend") {
        std::vector<ScreeplotPoint> pts;
        const double rss[] = {100, 40, 5, 4, 3};
        for (Index k = 1; k <= 5; ++k) pts.push_back({k, rss[k - 1], rss[k - 1], {}});
        CHECK(suggest_elbow(pts) == Index{3});
        pts.resize(2);
        CHECK_FALSE(suggest_elbow(pts).has_value());
    }
    SECTION("repeated points flatten at their count") {
        Matrix base(3, 2);
        base << 0, 0, 10, 0, 0, 10;
        Matrix x(12, 2);
        for (Index i = 0; i < 12; ++i) x.row(i) = base.row(i % 3);
        const auto plot = screeplot(DataMatrix::from(x), 1, 5);
        CHECK(plot.points[2].rss == Approx(0.0).margin(1e-18));
        CHECK(plot.points[3].rss == Approx(0.0).margin(1e-18));
        CHECK(plot.points[1].rss > 1.0);
    }
    SECTION("monotone envelope on random data") {
        Random rng(7);
        const auto data = random_rows(rng, 20, 2);
        const auto plot = screeplot(data, 1, 6);
        for (std::size_t t = 1; t < plot.points.size(); ++t) {
            CHECK(plot.points[t].k == plot.points[t - 1].k + 1);
            CHECK(plot.points[t].envelope <= plot.points[t - 1].envelope);
            CHECK(plot.points[t].envelope <= plot.points[t].rss);
        }
    }
    CHECK_THROWS_AS(screeplot(DataMatrix::from(Matrix::Zero(3, 2)), 0, 2), InputError);
}
