#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ebir {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

} // namespace ebir
