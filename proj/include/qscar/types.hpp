#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

namespace qscar {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Format a double with 17 significant digits (round-trip safe).
std::string format_double(double x);

}  // namespace qscar
