#pragma once

#include "asyhplot/core/error.hpp"
#include "asyhplot/core/types.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace asyhplot {

/// Lawson-Hanson active-set solver for min ||A x - b|| subject to x >= 0.
inline Vector nnls(const Matrix& a, const Vector& b, int max_iter = 0) {
    const Index m = a.rows();
    const Index n = a.cols();
    if (b.size() != m) throw InputError("nnls: right-hand side has wrong length");
    if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 30);

    Vector x = Vector::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 10.0 * std::numeric_limits<double>::epsilon() * std::max<double>(1.0, a.cwiseAbs().maxCoeff()) *
                       static_cast<double>(std::max(m, n));

    const auto solve_passive = [&](Vector& z) {
        std::vector<Index> idx;
        for (Index j = 0; j < n; ++j) {
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        }
        Matrix ap(m, static_cast<Index>(idx.size()));
        for (std::size_t t = 0; t < idx.size(); ++t) ap.col(static_cast<Index>(t)) = a.col(idx[t]);
        const Vector zp = ap.colPivHouseholderQr().solve(b);
        z.setZero(n);
        for (std::size_t t = 0; t < idx.size(); ++t) z(idx[t]) = zp(static_cast<Index>(t));
    };

    Vector w = a.transpose() * (b - a * x);
    for (int outer = 0; outer < max_iter; ++outer) {
        Index enter = -1;
        double best = tol;
        for (Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
                best = w(j);
                enter = j;
            }
        }
        if (enter < 0) break;
        passive[static_cast<std::size_t>(enter)] = true;

        Vector z;
        for (int inner = 0; inner < max_iter; ++inner) {
            solve_passive(z);
            double step = 1.0;
            bool blocked = false;
            for (Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    const double denom = x(j) - z(j);
                    const double t = denom > 0.0 ? x(j) / denom : 0.0;
                    if (!blocked || t < step) step = t;
                    blocked = true;
                }
            }
            if (!blocked) break;
            x += step * (z - x);
            for (Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    x(j) = 0.0;
                }
            }
        }
        x = z.cwiseMax(0.0);
        w = a.transpose() * (b - a * x);
    }
    return x;
}

/// Weights on the probability simplex closest in least squares:
/// min || target - points^T w ||  s.t.  w >= 0, sum(w) = 1,
/// where each row of `points` is a vertex.
///
/// A penalty-augmented NNLS (extra row of weight `penalty` asking the weights
/// to sum to one) supplies the starting support; a primal active-set method
/// with the equality constraint imposed exactly then finishes the solve, so
/// rows sum to one to rounding error rather than to O(1/penalty^2).
inline Vector simplex_least_squares(const Matrix& points, const Vector& target, double penalty = 200.0) {
    const Index k = points.rows();
    const Index m = points.cols();
    if (k == 0) throw InputError("simplex_least_squares: no vertices");
    if (target.size() != m) throw InputError("simplex_least_squares: dimension mismatch");
    if (k == 1) return Vector::Ones(1);

    Matrix augmented(m + 1, k);
    augmented.topRows(m) = points.transpose();
    augmented.row(m).setConstant(penalty);
    Vector rhs(m + 1);
    rhs.head(m) = target;
    rhs(m) = penalty;
    Vector w = nnls(augmented, rhs);
    const double total = w.sum();
    if (!(total > 0.0)) {
        w.setZero();
        w(0) = 1.0;
    } else {
        w /= total;
    }

    const Matrix gram = points * points.transpose();
    const Vector lin = points * target;
    const double scale = std::max({1.0, gram.cwiseAbs().maxCoeff(), lin.cwiseAbs().maxCoeff()});
    const double tol = 1e-12 * scale;

    std::vector<bool> passive(static_cast<std::size_t>(k));
    for (Index j = 0; j < k; ++j) passive[static_cast<std::size_t>(j)] = w(j) > 0.0;

    // KKT system on the passive set: [G_PP 1; 1^T 0] [w_P; mu] = [c_P; 1].
    const auto solve_passive = [&](Vector& z) {
        std::vector<Index> idx;
        for (Index j = 0; j < k; ++j) {
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        }
        const auto p = static_cast<Index>(idx.size());
        Matrix kkt = Matrix::Zero(p + 1, p + 1);
        Vector r(p + 1);
        for (Index s = 0; s < p; ++s) {
            for (Index t = 0; t < p; ++t) kkt(s, t) = gram(idx[static_cast<std::size_t>(s)], idx[static_cast<std::size_t>(t)]);
            kkt(s, p) = 1.0;
            kkt(p, s) = 1.0;
            r(s) = lin(idx[static_cast<std::size_t>(s)]);
        }
        r(p) = 1.0;
        const Vector sol = kkt.completeOrthogonalDecomposition().solve(r);
        z.setZero(k);
        for (Index s = 0; s < p; ++s) z(idx[static_cast<std::size_t>(s)]) = sol(s);
    };

    Index just_added = -1;
    const int max_iter = static_cast<int>(20 * k + 50);
    for (int iter = 0; iter < max_iter; ++iter) {
        Vector z;
        solve_passive(z);

        double step = 1.0;
        Index blocking = -1;
        for (Index j = 0; j < k; ++j) {
            if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                const double denom = w(j) - z(j);
                const double t = denom > 0.0 ? w(j) / denom : 0.0;
                if (blocking < 0 || t < step) {
                    step = t;
                    blocking = j;
                }
            }
        }

        if (blocking >= 0) {
            if (step == 0.0 && blocking == just_added) break;  // entering weight cannot grow: optimal to tolerance
            w += step * (z - w);
            w(blocking) = 0.0;
            for (Index j = 0; j < k; ++j) {
                if (passive[static_cast<std::size_t>(j)] && w(j) <= 0.0) {
                    passive[static_cast<std::size_t>(j)] = false;
                    w(j) = 0.0;
                }
            }
            just_added = -1;
            continue;
        }

        w = z;
        const Vector grad = gram * w - lin;
        double multiplier = 0.0;
        Index count = 0;
        for (Index j = 0; j < k; ++j) {
            if (passive[static_cast<std::size_t>(j)]) {
                multiplier += grad(j);
                ++count;
            }
        }
        multiplier /= static_cast<double>(count);
        Index enter = -1;
        double most_negative = -tol;
        for (Index j = 0; j < k; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && grad(j) - multiplier < most_negative) {
                most_negative = grad(j) - multiplier;
                enter = j;
            }
        }
        if (enter < 0) break;
        passive[static_cast<std::size_t>(enter)] = true;
        just_added = enter;
    }

    w = w.cwiseMax(0.0);
    const double sum = w.sum();
    if (!(sum > 0.0)) throw NumericalError("simplex_least_squares: solver lost feasibility");
    return w / sum;
}

}  // namespace asyhplot
