#pragma once

#include <Eigen/Dense>

namespace cscgd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace cscgd
