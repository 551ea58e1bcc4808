#pragma once

#include <Eigen/Dense>

namespace odl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

} // namespace odl
