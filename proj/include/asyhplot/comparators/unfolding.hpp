#pragma once

// Metric multidimensional unfolding by iterative majorization of raw stress
//   sum_ij (delta_ij - || x1_i - x2_j ||)^2
// over a row configuration X1 and a column configuration X2.

#include "asyhplot/core/error.hpp"
#include "asyhplot/core/rng.hpp"
#include "asyhplot/core/types.hpp"
#include "asyhplot/data_ingest.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace asyhplot {

enum class RoleOrder {
    RowsAsIndividuals,     // rows of delta are the individuals (citing role)
    ColumnsAsIndividuals,  // delta is transposed first (roles exchanged)
};

struct UnfoldingOptions {
    int restarts = 20;
    std::uint64_t seed = 1;
    int max_iter = 5000;
    double rel_tol = 1e-8;
    Index dimension = 2;
};

struct UnfoldingRun {
    std::vector<double> trace;  // stress of the start, then after each accepted iteration
    bool converged = false;
};

struct UnfoldingSolution {
    Matrix x1;  // individuals
    Matrix x2;  // objects
    double stress = 0.0;
    int restarts_used = 0;
    bool converged = false;
    RoleOrder role = RoleOrder::RowsAsIndividuals;
    std::vector<UnfoldingRun> runs;  // one per restart, in seed order
    LabelList labels;
};

inline double raw_stress(const Matrix& delta, const Matrix& x1, const Matrix& x2) {
    double s = 0.0;
    for (Index i = 0; i < delta.rows(); ++i) {
        for (Index j = 0; j < delta.cols(); ++j) {
            const double r = delta(i, j) - (x1.row(i) - x2.row(j)).norm();
            s += r * r;
        }
    }
    return s;
}

namespace detail {

// Guttman transform for every row of `moving` with `fixed` held constant;
// `target(i, j)` is the dissimilarity between moving row i and fixed row j.
template <typename Target>
Matrix guttman_half_step(const Target& target, const Matrix& moving, const Matrix& fixed) {
    const Index rows = moving.rows();
    const Index others = fixed.rows();
    Matrix updated = Matrix::Zero(rows, moving.cols());
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < others; ++j) {
            const RowVector diff = moving.row(i) - fixed.row(j);
            const double d = diff.norm();
            updated.row(i) += fixed.row(j);
            if (d > 0.0) updated.row(i) += (target(i, j) / d) * diff;
        }
        updated.row(i) /= static_cast<double>(others);
    }
    return updated;
}

}  // namespace detail

/// Multistart majorization; returns the lowest-stress configuration.
inline UnfoldingSolution unfolding_fit(const AsymmetricDissimilarityMatrix& input, RoleOrder role,
                                       const UnfoldingOptions& options = {}) {
    input.validate();
    const Index n = input.size();
    if (n < 3) throw InputError("unfolding_fit: need at least 3 objects, got " + std::to_string(n));
    if (options.restarts < 1) throw InputError("unfolding_fit: need at least one restart");
    if (options.dimension < 1) throw InputError("unfolding_fit: dimension must be positive");

    const Matrix delta = role == RoleOrder::RowsAsIndividuals ? input.delta : Matrix(input.delta.transpose());
    const Index rows = delta.rows();
    const Index cols = delta.cols();
    const Index p = options.dimension;
    const double spread = delta.mean();

    UnfoldingSolution best;
    best.role = role;
    best.labels = input.labels;
    best.stress = std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < options.restarts; ++restart) {
        Random rng(derive_seed(options.seed, static_cast<std::uint64_t>(restart)));
        Matrix x1(rows, p), x2(cols, p);
        for (Index i = 0; i < rows; ++i)
            for (Index c = 0; c < p; ++c) x1(i, c) = rng.uniform(-spread, spread);
        for (Index j = 0; j < cols; ++j)
            for (Index c = 0; c < p; ++c) x2(j, c) = rng.uniform(-spread, spread);

        UnfoldingRun run;
        double stress = raw_stress(delta, x1, x2);
        run.trace.push_back(stress);
        for (int iter = 0; iter < options.max_iter; ++iter) {
            Matrix next1 = detail::guttman_half_step(delta, x1, x2);
            const auto transposed = [&](Index i, Index j) { return delta(j, i); };
            Matrix next2 = detail::guttman_half_step(transposed, x2, next1);
            const double next_stress = raw_stress(delta, next1, next2);
            if (!(next_stress <= stress)) {
                // rounding floor: majorization cannot decrease further
                run.converged = true;
                break;
            }
            const double decrease = stress - next_stress;
            x1 = std::move(next1);
            x2 = std::move(next2);
            stress = next_stress;
            run.trace.push_back(stress);
            if (stress == 0.0 || decrease < options.rel_tol * stress) {
                run.converged = true;
                break;
            }
        }

        if (stress < best.stress) {
            best.stress = stress;
            best.x1 = x1;
            best.x2 = x2;
            best.converged = run.converged;
        }
        best.runs.push_back(std::move(run));
        best.restarts_used = restart + 1;
    }
    if (!std::isfinite(best.stress)) throw NumericalError("unfolding_fit: stress diverged");
    return best;
}

}  // namespace asyhplot
