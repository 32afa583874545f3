#pragma once

#include <Eigen/Dense>

namespace eukit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace eukit
