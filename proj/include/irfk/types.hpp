#pragma once

#include <complex>

#include <Eigen/Dense>

namespace irfk {

using cplx = std::complex<double>;

/// A location (or frequency) in R^d.
using Point = Eigen::VectorXd;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace irfk
