#include <asyhplot/archetypoids.hpp>
#include <asyhplot/nnls.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace asyhplot;
using Catch::Approx;

namespace {

// Minimum over all supports of the unconstrained fit restricted to that support,
// keeping only nonnegative solutions.
double nnls_brute_force(const Matrix& a, const Vector& b) {
    const Index n = a.cols();
    double best = b.squaredNorm();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Index> idx;
        for (Index j = 0; j < n; ++j)
            if (mask & (1u << j)) idx.push_back(j);
        Matrix sub(a.rows(), static_cast<Index>(idx.size()));
        for (std::size_t t = 0; t < idx.size(); ++t) sub.col(static_cast<Index>(t)) = a.col(idx[t]);
        const Vector x = sub.colPivHouseholderQr().solve(b);
        if ((x.array() < 0).any()) continue;
        best = std::min(best, (sub * x - b).squaredNorm());
    }
    return best;
}

}  // namespace

TEST_CASE("nnls reaches the brute-force optimum", "[nnls]") {
    Random rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        const Index m = 3 + static_cast<Index>(rng.uniform(0, 5));
        const Index n = 1 + static_cast<Index>(rng.uniform(0, 5));
        const Matrix a = oracle::random_matrix(rng, m, n, -1, 1);
        const Vector b = oracle::random_matrix(rng, m, 1, -2, 2);
        const Vector x = nnls(a, b);
        CHECK((x.array() >= 0).all());
        CHECK((a * x - b).squaredNorm() == Approx(nnls_brute_force(a, b)).epsilon(1e-9).margin(1e-12));
    }
}

TEST_CASE("simplex least squares basics", "[nnls]") {
    Matrix vertices(3, 2);
    vertices << 0, 0, 4, 0, 0, 4;
    SECTION("a vertex represents itself exactly") {
        const Vector w = simplex_least_squares(vertices, Vector(vertices.row(1).transpose()));
        CHECK(w(0) == 0.0);
        CHECK(w(1) == 1.0);
        CHECK(w(2) == 0.0);
    }
    SECTION("midpoint of two vertices") {
        Vector target(2);
        target << 2, 0;
        const Vector w = simplex_least_squares(vertices, target);
        CHECK(w(0) == Approx(0.5).margin(1e-6));
        CHECK(w(1) == Approx(0.5).margin(1e-6));
        CHECK(w(2) == Approx(0.0).margin(1e-6));
    }
    SECTION("single vertex") {
        const Vector w = simplex_least_squares(vertices.topRows(1), Vector::Ones(2));
        CHECK(w.size() == 1);
        CHECK(w(0) == 1.0);
    }
}

TEST_CASE("simplex least squares agrees with a grid search outside the hull", "[nnls][property]") {
    Random rng(5150);
    for (int trial = 0; trial < 30; ++trial) {
        const Index k = 2 + static_cast<Index>(rng.uniform(0, 2));
        const Index m = 2 + static_cast<Index>(rng.uniform(0, 3));
        const Matrix vertices = oracle::random_matrix(rng, k, m, -3, 3);
        const Vector target = oracle::random_matrix(rng, m, 1, -8, 8);
        const Vector w = simplex_least_squares(vertices, target);
        const Vector g = oracle::grid_simplex_projection(vertices, target);
        CHECK(std::abs(w.sum() - 1.0) < 1e-12);
        CHECK((w.array() >= 0).all());
        CHECK((w - g).cwiseAbs().maxCoeff() < 1e-3);
        // the exact solver may never lose to the grid
        CHECK((target - vertices.transpose() * w).squaredNorm() <= (target - vertices.transpose() * g).squaredNorm() + 1e-12);
    }
}

TEST_CASE("solve_alpha over data rows", "[archetypoids]") {
    Matrix x(4, 2);
    x << 0, 0, 2, 0, 1, 0, 5, 5;
    const auto data = DataMatrix::from(x);
    const auto fit = solve_alpha(data, {0, 1});
    CHECK(fit.alpha.row(0) == RowVector::Unit(2, 0));
    CHECK(fit.alpha.row(1) == RowVector::Unit(2, 1));
    CHECK(fit.alpha(2, 0) == Approx(0.5).margin(1e-6));
    CHECK(fit.alpha(2, 1) == Approx(0.5).margin(1e-6));
    // (5,5) projects onto the segment at (2,0): residual 9 + 25
    CHECK(fit.alpha(3, 1) == Approx(1.0).margin(1e-12));
    CHECK(fit.rss == Approx(34.0).epsilon(1e-12));

    CHECK_THROWS_AS(solve_alpha(data, {}), InputError);
    CHECK_THROWS_AS(solve_alpha(data, {1, 1}), InputError);
    CHECK_THROWS_AS(solve_alpha(data, {0, 9}), InputError);
}
