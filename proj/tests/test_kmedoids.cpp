#include <asyhplot/comparators/kmedoids.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace asyhplot;
using Catch::Approx;

namespace {

// Lowest sum of distances to the nearest medoid over every k-subset.
double best_medoid_cost(const Matrix& dist, Index k) {
    const Index n = dist.rows();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<Index>(__builtin_popcount(mask)) != k) continue;
        double cost = 0;
        for (Index i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (Index j = 0; j < n; ++j)
                if (mask & (1u << j)) nearest = std::min(nearest, dist(i, j));
            cost += nearest;
        }
        best = std::min(best, cost);
    }
    return best;
}

// Silhouette written out from its definition.
double silhouette_by_hand(const Matrix& x, const std::vector<Index>& assignment, Index i) {
    const auto cluster = assignment[static_cast<std::size_t>(i)];
    std::map<Index, std::pair<double, int>> sums;
    for (Index j = 0; j < x.rows(); ++j) {
        if (j == i) continue;
        auto& s = sums[assignment[static_cast<std::size_t>(j)]];
        s.first += (x.row(i) - x.row(j)).norm();
        ++s.second;
    }
    if (!sums.count(cluster)) return 0.0;
    const double a = sums[cluster].first / sums[cluster].second;
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [c, s] : sums)
        if (c != cluster) b = std::min(b, s.first / s.second);
    return (b - a) / std::max(a, b);
}

}  // namespace

TEST_CASE("two tight separated clusters score near one", "[kmedoids]") {
    Random rng(12);
    Matrix x(12, 4);
    for (Index i = 0; i < 12; ++i)
        for (Index c = 0; c < 4; ++c) x(i, c) = (i < 6 ? 0.0 : 20.0) + rng.uniform(-0.5, 0.5);
    const auto result = kmedoids_silhouette(DataMatrix::from(x), 2, 4);
    REQUIRE(result.size() == 3);
    CHECK(result[0].k == 2);
    CHECK(result[0].average_silhouette > 0.9);
    for (Index i = 0; i < 12; ++i) CHECK(result[0].assignment[static_cast<std::size_t>(i)] == result[0].assignment[i < 6 ? 0 : 6]);
    CHECK(result[0].average_silhouette > result[1].average_silhouette);
}

TEST_CASE("silhouettes follow the definition and stay in bounds", "[kmedoids][property]") {
    Random rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix x = oracle::random_matrix(rng, 9, 3, -2, 2);
        const auto data = DataMatrix::from(x);
        for (const auto& clustering : kmedoids_silhouette(data, 2, 8)) {
            double sum = 0;
            for (Index i = 0; i < 9; ++i) {
                const double s = clustering.silhouettes[static_cast<std::size_t>(i)];
                CHECK(s >= -1.0);
                CHECK(s <= 1.0);
                CHECK(s == Approx(silhouette_by_hand(x, clustering.assignment, i)).margin(1e-12));
                sum += s;
            }
            CHECK(clustering.average_silhouette == Approx(sum / 9).margin(1e-12));
            CHECK_FALSE(clustering.degenerate);
        }
    }
}

TEST_CASE("PAM assigns nearest medoids and never beats enumeration", "[kmedoids][oracle]") {
    Random rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix x = oracle::random_matrix(rng, 10, 2, -5, 5);
        const Matrix dist = euclidean_distances(x);
        for (Index k = 2; k <= 3; ++k) {
            const auto c = pam(dist, k);
            CHECK(c.cost >= best_medoid_cost(dist, k) - 1e-9);
            for (Index i = 0; i < 10; ++i) {
                const Index own = c.medoids[static_cast<std::size_t>(c.assignment[static_cast<std::size_t>(i)])];
                for (Index m : c.medoids) CHECK(dist(i, own) <= dist(i, m));
            }
        }
    }
}

TEST_CASE("k-medoids boundaries and degenerate data", "[kmedoids]") {
    Random rng(23);
    const auto data = DataMatrix::from(oracle::random_matrix(rng, 7, 4));
    const auto top = kmedoids_silhouette(data, 6, 6);
    REQUIRE(top.size() == 1);
    CHECK(std::isfinite(top[0].average_silhouette));

    CHECK_THROWS_AS(kmedoids_silhouette(data, 1, 3), InputError);
    CHECK_THROWS_AS(kmedoids_silhouette(data, 2, 7), InputError);
    CHECK_THROWS_AS(kmedoids_silhouette(data, 4, 3), InputError);

    Matrix dup(6, 2);
    dup << 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 5, 5;
    const auto flat = kmedoids_silhouette(DataMatrix::from(dup), 2, 2);
    CHECK(std::isfinite(flat[0].average_silhouette));
    Matrix same = Matrix::Zero(5, 2);
    const auto zero = kmedoids_silhouette(DataMatrix::from(same), 2, 2);
    CHECK(zero[0].degenerate);
    CHECK(zero[0].average_silhouette == 0.0);
}
