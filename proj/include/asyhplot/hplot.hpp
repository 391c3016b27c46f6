#pragma once

// h-plot of the 2n dissimilarity-profile variables of an asymmetric matrix.
//
// Each object j contributes two variables: its "to" profile (column j of the
// dissimilarity matrix, how every object relates to j) and its "from" profile
// (row j, how j relates to every object). The variables are placed so that the
// Euclidean distance between two of them approximates the sample standard
// deviation of their difference, exactly so in full dimension. Ranking of the
// original dissimilarities is not preserved by this map.

#include "asyhplot/core/error.hpp"
#include "asyhplot/core/types.hpp"
#include "asyhplot/data_ingest.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace asyhplot {

/// D = [delta | delta^T]: columns 0..n-1 are to-profiles, n..2n-1 from-profiles.
struct ProfileMatrix {
    Matrix d;
    LabelList labels;

    Index objects() const { return d.rows(); }
    Index variables() const { return d.cols(); }
};

struct HPlotEmbedding {
    Matrix coords;       // 2n x p; rows 0..n-1 to-profiles, n..2n-1 from-profiles
    Vector eigenvalues;  // full spectrum of the 2n x 2n covariance, nonincreasing
    double gof = 0.0;
    LabelList labels;

    Index objects() const { return coords.rows() / 2; }
    Index dimension() const { return coords.cols(); }
    RowVector to_profile(Index j) const { return coords.row(j); }
    RowVector from_profile(Index j) const { return coords.row(objects() + j); }
};

struct AsymmetryScore {
    Index index = 0;
    std::string label;
    double score = 0.0;
};

/// Objects ordered from most to least asymmetric.
using AsymmetryReport = std::vector<AsymmetryScore>;

inline ProfileMatrix build_profile_matrix(const AsymmetricDissimilarityMatrix& delta) {
    delta.validate();
    const Index n = delta.size();
    ProfileMatrix out;
    out.d.resize(n, 2 * n);
    out.d.leftCols(n) = delta.delta;
    out.d.rightCols(n) = delta.delta.transpose();
    out.labels = delta.labels;
    return out;
}

/// Share of the squared spectrum carried by the first p eigenvalues.
inline double goodness_of_fit(const Vector& spectrum, Index p) {
    if (p < 1) throw InputError("goodness_of_fit: dimension must be at least 1");
    if (spectrum.size() == 0) throw InputError("goodness_of_fit: empty spectrum");
    const double scale = std::max(1.0, spectrum.cwiseAbs().maxCoeff());
    for (Index k = 0; k < spectrum.size(); ++k) {
        if (spectrum(k) < -1e-12 * scale) throw InputError("goodness_of_fit: spectrum has a negative eigenvalue");
        if (k > 0 && spectrum(k) > spectrum(k - 1) + 1e-12 * scale)
            throw InputError("goodness_of_fit: spectrum is not in nonincreasing order");
    }
    const Vector clamped = spectrum.cwiseMax(0.0);
    const double total = clamped.squaredNorm();
    if (total == 0.0) throw InputError("goodness_of_fit: all-zero spectrum, there is no variance to explain");
    if (p >= clamped.size()) return 1.0;
    return std::min(1.0, clamped.head(p).squaredNorm() / total);
}

/// Embeds the profile variables in p dimensions.
///
/// Works from the thin SVD of the column-centered profile matrix, so the
/// 2n x 2n covariance (divisor n - 1) is never formed. Coordinates are
/// computed as centered_column^T * u_k / sqrt(n - 1), which equals
/// sqrt(lambda_k) q_k and makes each row a function of its own column only;
/// identical variables therefore land on bit-identical points. Each axis is
/// oriented so its largest-magnitude coordinate is positive.
inline HPlotEmbedding hplot_embed(const ProfileMatrix& profiles, Index p = 2) {
    const Index n = profiles.objects();
    const Index vars = profiles.variables();
    if (n < 2) throw InputError("hplot_embed: need at least 2 objects");
    if (!profiles.d.allFinite()) throw InputError("hplot_embed: profile matrix has non-finite entries");
    if (p < 1) throw InputError("hplot_embed: dimension must be at least 1");
    if (p > n - 1 || p > vars)
        throw InputError("hplot_embed: dimension " + std::to_string(p) + " exceeds the rank bound " +
                         std::to_string(std::min(n - 1, vars)) + " of the covariance");

    Matrix centered(n, vars);
    for (Index c = 0; c < vars; ++c) {
        const auto col = profiles.d.col(c);
        if (col.minCoeff() == col.maxCoeff()) {
            centered.col(c).setZero();
        } else {
            // scalar loops: identical input columns must give identical output bits
            double mean = 0.0;
            for (Index i = 0; i < n; ++i) mean += col(i);
            mean /= static_cast<double>(n);
            for (Index i = 0; i < n; ++i) centered(i, c) = col(i) - mean;
        }
    }

    Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinU);
    const Vector& sigma = svd.singularValues();
    const double divisor = static_cast<double>(n - 1);

    HPlotEmbedding out;
    out.labels = profiles.labels;
    out.eigenvalues = Vector::Zero(vars);
    for (Index k = 0; k < sigma.size(); ++k) out.eigenvalues(k) = sigma(k) * sigma(k) / divisor;
    const double lead = out.eigenvalues(0);
    if (!(lead > 0.0)) throw NumericalError("hplot_embed: every profile variable is constant; the covariance has no positive spectrum");
    for (Index k = 0; k < vars; ++k) {
        if (out.eigenvalues(k) <= 1e-12 * lead) out.eigenvalues(k) = 0.0;
    }

    out.coords.resize(vars, p);
    const double inv_sqrt = 1.0 / std::sqrt(divisor);
    for (Index k = 0; k < p; ++k) {
        if (out.eigenvalues(k) == 0.0) {
            out.coords.col(k).setZero();
            continue;
        }
        const auto u = svd.matrixU().col(k);
        for (Index r = 0; r < vars; ++r) {
            double dot = 0.0;
            for (Index i = 0; i < n; ++i) dot += centered(i, r) * u(i);
            out.coords(r, k) = dot * inv_sqrt;
        }
        Index arg = 0;
        out.coords.col(k).cwiseAbs().maxCoeff(&arg);
        if (out.coords(arg, k) < 0.0) out.coords.col(k) = -out.coords.col(k);
    }
    out.gof = goodness_of_fit(out.eigenvalues, p);
    return out;
}

inline HPlotEmbedding hplot_embed(const AsymmetricDissimilarityMatrix& delta, Index p = 2) {
    return hplot_embed(build_profile_matrix(delta), p);
}

/// Distance between each object's to- and from-profile, largest first.
inline AsymmetryReport asymmetry_scores(const HPlotEmbedding& emb) {
    if (emb.coords.rows() % 2 != 0) throw InputError("asymmetry_scores: embedding must have 2n rows");
    const Index n = emb.objects();
    AsymmetryReport report;
    report.reserve(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        const double s = (emb.coords.row(j) - emb.coords.row(n + j)).norm();
        report.push_back({j, j < static_cast<Index>(emb.labels.size()) ? emb.labels[static_cast<std::size_t>(j)] : std::to_string(j + 1), s});
    }
    std::stable_sort(report.begin(), report.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    return report;
}

/// Sample standard deviation (divisor n - 1) of column i minus column j.
inline double profile_distance_check(const ProfileMatrix& profiles, Index i, Index j) {
    const Index vars = profiles.variables();
    if (i < 0 || j < 0 || i >= vars || j >= vars) throw InputError("profile_distance_check: column index out of range");
    const Index n = profiles.objects();
    if (n < 2) throw InputError("profile_distance_check: need at least 2 rows");
    const Vector diff = profiles.d.col(i) - profiles.d.col(j);
    const double mean = diff.mean();
    return std::sqrt((diff.array() - mean).square().sum() / static_cast<double>(n - 1));
}

}  // namespace asyhplot
