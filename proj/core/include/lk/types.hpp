#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace lk {

using Index = std::ptrdiff_t;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
/// One point per row. Row-major so that a point is contiguous.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

}  // namespace lk
