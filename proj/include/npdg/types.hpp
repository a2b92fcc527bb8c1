#pragma once

#include <Eigen/Dense>

namespace npdg {

/// Dense, row-major, double precision. All matrices in the library use this.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace npdg
