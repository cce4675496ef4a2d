#include <gtest/gtest.h>

#include <cmath>

#include "bergman/curve.hpp"
#include "bergman/errors.hpp"
#include "test_support.hpp"

namespace bergman {
namespace {

using test::monic_curve;

TEST(Curve, CuspidalCubicIsSingularWithRamificationOne) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  EXPECT_TRUE(c.is_singular());
  EXPECT_EQ(c.ramification_index(), 1);
  EXPECT_TRUE(c.is_radial());
}

TEST(Curve, ConicIsSmooth) {
  const auto c = new_curve({1, 0, 0}, 2);
  EXPECT_FALSE(c.is_singular());
  EXPECT_EQ(c.ramification_index(), 0);
}

TEST(Curve, RejectsBadInput) {
  try {
    new_curve({0, 1, 0, 0}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroLeadingCoefficient);
  }
  try {
    new_curve({1, 0}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegreeTooSmall);
  }
  EXPECT_THROW(new_curve({1, 0, 0}, 3), Error);
}

TEST(Curve, PolynomialMatchesHomogeneousForm) {
  // Q(z0, z1) = 2 z1^3 - z0 z1^2 + 3i z0^3
  const auto c = new_curve({2, -1, 0, Complex(0, 3)}, 3);
  const Complex z(0.3, -1.2);
  EXPECT_NEAR(std::abs(c.p(z) - (2.0 * z * z * z - z * z + Complex(0, 3))), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c.dp(z) - (6.0 * z * z - 2.0 * z)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c.q(Complex(2.0), z) - (2.0 * z * z * z - 2.0 * z * z + Complex(0, 24))), 0.0, 1e-13);
}

TEST(Curve, NormalizationHitsSingularPointAndGraph) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  EXPECT_TRUE(normalize_point(c, 0.0, 1.0).equivalent(PlaneCurve::singular_point()));
  const Complex z(0.7, 0.2);
  const auto g = normalize_point(c, 1.0, z);
  EXPECT_TRUE(g.equivalent({{Complex(1.0), z, c.p(z)}}));
  EXPECT_TRUE(normalize_point(c, 1.0, 0.0).equivalent({{Complex(1.0), Complex(0.0), Complex(0.0)}}));
  try {
    normalize_point(c, 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BothZero);
  }
}

TEST(Curve, NormalizedPointsLieOnCurve) {
  const auto c = monic_curve(4, {Complex(0.5, 1), 0, -2});
  for (int k = 1; k < 40; ++k) {
    const Complex t = std::polar(0.05 * k, 0.37 * k);
    const auto x = normalize_point(c, t, 1.0).z;
    // z0^{d-1} z2 - Q(z0, z1)
    const Complex lhs = std::pow(x[0], 3) * x[2];
    const Complex rhs = c.q(x[0], x[1]);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(rhs))) << "t = " << t;
  }
}

TEST(Curve, FsDensityAtOrigin) {
  EXPECT_NEAR(fs_pullback_density(new_curve({1, 0, 0}, 2), 0.0), 1.0 / kPi, 1e-15);
}

TEST(Curve, FsDensityMatchesClosedFormAndLogVersion) {
  const auto c = monic_curve(3, {1.0, Complex(0, 1)});
  for (const Complex z : {Complex(0.1, 0.2), Complex(-1.5, 0.7), Complex(4.0, -3.0)}) {
    const Complex p = c.p(z);
    const Complex dp = 3.0 * z * z + Complex(0, 1);
    const double num = 1.0 + std::norm(dp) + std::norm(z * dp - p);
    const double den = kPi * std::pow(1.0 + std::norm(z) + std::norm(p), 2);
    EXPECT_NEAR(fs_pullback_density(c, z) / (num / den), 1.0, 1e-13);
    EXPECT_NEAR(log_fs_pullback_density(c, z), std::log(num / den), 1e-12);
  }
  // Far out the density underflows but its log stays accurate: W ~ (d-1)^2 / (pi r^{2d}).
  const double r = 1e60;
  EXPECT_NEAR(log_fs_pullback_density(c, r), std::log(4.0 / kPi) - 6.0 * std::log(r), 1e-9);
}

TEST(Curve, FsDensityDecaysLikeInversePower) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  double lo = 1e300;
  double hi = 0.0;
  for (double r = 10; r <= 1e4; r *= 1.5) {
    const double v = fs_pullback_density(c, std::polar(r, 0.3)) * (1 + std::pow(r, 6));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GT(lo, 0.5);
  EXPECT_LT(hi, 2.0);
}

TEST(Curve, FsDensityRadialForMonomial) {
  const auto c = new_curve({1, 0, 0, 0, 0}, 4);
  for (double theta : {0.1, 1.0, 2.5}) {
    const Complex z = std::polar(1.3, 0.4);
    const double a = fs_pullback_density(c, z);
    const double b = fs_pullback_density(c, z * std::polar(1.0, theta));
    EXPECT_LE(std::abs(a - b), 1e-14 * a);
  }
}

TEST(Curve, GeneratorsOrderAndShape) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  const auto g = restricted_space_generators(c, 2);
  ASSERT_EQ(g.rows(), 7);
  ASSERT_EQ(g.cols(), 6);
  // c = 0: 1, zeta, zeta^2; c = 1: P, zeta P; c = 2: P^2
  const int expected_degree[] = {0, 1, 2, 3, 4, 6};
  for (int k = 0; k < 6; ++k) EXPECT_EQ(std::abs(g(expected_degree[k], k)), 1.0) << k;
}

// Independent count: V_p is the image of degree-p polynomials in (z1, z2)
// modulo those divisible by the curve equation, which has degree d. Its
// dimension is (p+1)(p+2)/2 - (p-d+1)(p-d+2)/2 for p >= d, and the full
// (p+1)(p+2)/2 below.
int restriction_oracle(int d, int p) {
  const int all = (p + 1) * (p + 2) / 2;
  const int q = p - d;
  return q >= 0 ? all - (q + 1) * (q + 2) / 2 : all;
}

TEST(Curve, RestrictionRankMatchesMonomialCount) {
  for (int d = 2; d <= 5; ++d)
    for (int p = 1; p <= 5; ++p)
      EXPECT_EQ(restricted_space_rank(monic_curve(d, {0.3, Complex(0, -0.5)}), p), restriction_oracle(d, p))
          << "d=" << d << " p=" << p;
}

TEST(Curve, RestrictionClosedFormHoldsFromLevelDMinusTwo) {
  for (int d = 3; d <= 5; ++d)
    for (int p = d - 2; p <= 6; ++p)
      EXPECT_EQ(restriction_oracle(d, p), restriction_dimension_closed_form(d, p)) << "d=" << d << " p=" << p;
}

TEST(Curve, RestrictionExamples) {
  EXPECT_EQ(restricted_space_rank(new_curve({1, 0, 0, 0}, 3), 2), 6);
  EXPECT_EQ(restricted_space_rank(new_curve({1, 0, 0, 0, 0}, 4), 2), 6);
  EXPECT_EQ(restricted_space_rank(new_curve({1, 0, 0, 0}, 3), 1), 3);
}

TEST(Curve, DimensionArithmetic) {
  EXPECT_EQ(weakly_holomorphic_dimension(3, 2), 7);
  EXPECT_EQ(restriction_dimension_closed_form(3, 2), 6);
  EXPECT_EQ(regular_degree_cutoff(3, 2) + 1, 8);
  EXPECT_EQ(restriction_dimension_closed_form(2, 3), 7);
  EXPECT_TRUE(degree_is_integrable(7, 3, 2));
  EXPECT_FALSE(degree_is_integrable(8, 3, 2));
}

TEST(Curve, NumericalRankSeesDependence) {
  MatrixXc m(3, 3);
  m << 1, 2, 3, 0, 1, 1, 1, 3, 4;  // col3 = col1 + col2
  EXPECT_EQ(numerical_rank(m), 2);
  const MatrixXc basis = column_space_basis(m);
  EXPECT_EQ(basis.cols(), 2);
  EXPECT_NEAR((basis.adjoint() * basis - MatrixXc::Identity(2, 2)).norm(), 0.0, 1e-14);
}

}  // namespace
}  // namespace bergman
