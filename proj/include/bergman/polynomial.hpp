#pragma once

#include <algorithm>
#include <complex>
#include <utility>

#include <Eigen/Core>

#include "bergman/types.hpp"

namespace bergman {

//! Horner evaluation of sum_k c(k) z^k.
template <typename Derived>
auto horner(const Eigen::MatrixBase<Derived>& c, const typename Derived::Scalar& z) {
  using Scalar = typename Derived::Scalar;
  Scalar acc{0};
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * z + c(k);
  return acc;
}

//! Value and first derivative in one pass.
template <typename Derived>
auto horner_with_derivative(const Eigen::MatrixBase<Derived>& c, const typename Derived::Scalar& z) {
  using Scalar = typename Derived::Scalar;
  Scalar value{0};
  Scalar slope{0};
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
    slope = slope * z + value;
    value = value * z + c(k);
  }
  return std::pair<Scalar, Scalar>{value, slope};
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> derivative(const Eigen::MatrixBase<Derived>& c) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(std::max<Eigen::Index>(c.size() - 1, 1));
  out.setZero();
  for (Eigen::Index k = 1; k < c.size(); ++k) out(k - 1) = c(k) * static_cast<Real>(k);
  return out;
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> multiply(const Eigen::MatrixBase<DerivedA>& a,
                                                                    const Eigen::MatrixBase<DerivedB>& b) {
  Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, 1> out(a.size() + b.size() - 1);
  out.setZero();
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i + j) += a(i) * b(j);
  return out;
}

//! Largest index whose coefficient exceeds rel_tol * max|c|; -1 for the zero polynomial.
template <typename Derived>
Eigen::Index effective_degree(const Eigen::MatrixBase<Derived>& c, double rel_tol = 1e-12) {
  if (c.size() == 0) return -1;
  const auto scale = c.cwiseAbs().maxCoeff();
  if (!(scale > 0)) return -1;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k)
    if (std::abs(c(k)) > rel_tol * scale) return k;
  return -1;
}

}  // namespace bergman
