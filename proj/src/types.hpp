#pragma once

#include <Eigen/Dense>

namespace dppriv {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Data convention throughout: rows are attributes, columns are records.
// An n x m DataMatrix holds m records of dimension n.
using DataMatrix = Eigen::MatrixXd;

} // namespace dppriv
