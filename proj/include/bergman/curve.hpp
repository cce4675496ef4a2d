#pragma once

#include <array>
#include <vector>

#include "bergman/types.hpp"

namespace bergman {

//! Point of P^2 in homogeneous coordinates. Comparisons go through the
//! representative whose largest-modulus coordinate equals one.
struct ProjectivePoint {
  std::array<Complex, 3> z{};

  ProjectivePoint normalized() const;
  bool equivalent(const ProjectivePoint& other, double tol = 1e-12) const;
};

/**
 * The plane curve X_Q = { z0^{d-1} z2 = Q(z0, z1) } with
 * Q(z0, z1) = sum_j a_j z0^j z1^{d-j}, so that in the chart z0 = 1 it is the
 * graph of P(zeta) = Q(1, zeta).
 *
 * X_Q is normalized by P^1 through [t0:t1] -> [t0^d : t0^{d-1} t1 : Q(t0, t1)].
 * For d >= 3 the only singular point is x1 = [0:0:1]; the unique preimage
 * y = [0:1] carries ramification index d - 2.
 */
class PlaneCurve {
 public:
  //! Throws ZeroLeadingCoefficient, DegreeTooSmall, InvalidArgument.
  PlaneCurve(std::vector<Complex> homogeneous_coeffs, int degree);

  int degree() const { return degree_; }
  const std::vector<Complex>& homogeneous_coeffs() const { return a_; }

  //! Ascending coefficients of P and P'.
  const VectorXc& p_coeffs() const { return p_; }
  const VectorXc& p_derivative() const { return dp_; }

  Complex p(Complex zeta) const;
  Complex dp(Complex zeta) const;
  Complex q(Complex t0, Complex t1) const;

  bool is_singular() const { return degree_ >= 3; }
  int ramification_index() const { return degree_ - 2; }
  //! True when P = a0 zeta^d, in which case every weight built from P is radial.
  bool is_radial() const;

  static ProjectivePoint singular_point() { return {{Complex{0}, Complex{0}, Complex{1}}}; }

 private:
  int degree_;
  std::vector<Complex> a_;
  VectorXc p_;
  VectorXc dp_;
};

inline PlaneCurve new_curve(std::vector<Complex> coeffs, int degree) {
  return PlaneCurve(std::move(coeffs), degree);
}

//! sigma([t0:t1]); throws BothZero at the origin.
ProjectivePoint normalize_point(const PlaneCurve& curve, Complex t0, Complex t1);

//! Density of the pulled-back Fubini-Study form against Lebesgue measure on C.
double fs_pullback_density(const PlaneCurve& curve, Complex zeta);

//! log of fs_pullback_density, finite for |zeta| well beyond the overflow range of the density.
double log_fs_pullback_density(const PlaneCurve& curve, Complex zeta);

/**
 * Columns are zeta^a P(zeta)^c for a + c <= p, in ascending monomial
 * coordinates of length dp + 1. Ordered by c, then a.
 */
MatrixXc restricted_space_generators(const PlaneCurve& curve, int p);

//! Rank after normalizing columns, with singular values below rel_tol * sigma_max dropped.
Eigen::Index numerical_rank(const MatrixXc& columns, double rel_tol = 1e-9);

//! Orthonormal (Euclidean) basis of the column span, same column normalization and threshold.
MatrixXc column_space_basis(const MatrixXc& columns, double rel_tol = 1e-9);

int restricted_space_rank(const PlaneCurve& curve, int p);

//! Closed forms for the section spaces at level p.
constexpr int weakly_holomorphic_dimension(int d, int p) { return d * p + 1; }
constexpr int restriction_dimension_closed_form(int d, int p) { return d * p - d * (d - 3) / 2; }
constexpr int regular_degree_cutoff(int d, int p) { return d * p + d - 2; }

//! |zeta|^{2k} e^{-2p phi} W is integrable at infinity iff 2k - 2pd - 2d < -2.
constexpr bool degree_is_integrable(int k, int d, int p) { return 2 * k - 2 * p * d - 2 * d < -2; }

}  // namespace bergman
