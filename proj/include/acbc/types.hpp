#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace acbc {

// Row-major so that each observation is contiguous in memory.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace acbc
