#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace asyhplot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

using LabelList = std::vector<std::string>;

/// Default labels "1".."n" for data that arrive without names.
inline LabelList numbered_labels(Index n) {
    LabelList labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels.push_back(std::to_string(i + 1));
    return labels;
}

}  // namespace asyhplot
