#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace bergman {

using Complex = std::complex<double>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

//! Coefficient vectors are stored in ascending monomial order: c(k) multiplies zeta^k.
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXr = Eigen::VectorXd;
using MatrixXr = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace bergman
