#pragma once

#include <complex>

#include <Eigen/Dense>

namespace loewner {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace loewner
