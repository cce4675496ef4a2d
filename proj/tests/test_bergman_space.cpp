#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bergman/bergman_space.hpp"
#include "test_support.hpp"

namespace bergman {
namespace {

std::shared_ptr<const QuadratureGrid> default_grid() {
  static const auto grid = std::make_shared<const QuadratureGrid>(build_grid(QuadratureParams{}));
  return grid;
}

BergmanSpace fs_space(const PlaneCurve& c, SpaceKind kind, int p) {
  return build_space(kind, c, Weight::fubini_study(c), p, default_grid());
}

MatrixXc random_unitary(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  MatrixXc a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(normal(rng), normal(rng));
  return Eigen::HouseholderQR<MatrixXc>(a).householderQ();
}

TEST(SpaceKind, Names) {
  EXPECT_EQ(parse_space_kind("w"), SpaceKind::WeaklyHolomorphic);
  EXPECT_EQ(parse_space_kind("regular"), SpaceKind::RegularPart);
  EXPECT_EQ(parse_space_kind("restriction"), SpaceKind::Restriction);
  EXPECT_THROW(parse_space_kind("W"), Error);
  for (auto k : {SpaceKind::WeaklyHolomorphic, SpaceKind::RegularPart, SpaceKind::Restriction})
    EXPECT_EQ(parse_space_kind(to_string(k)), k);
}

TEST(Gram, RadialCurveHasDiagonalGramWithKnownEntries) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  const auto s = assemble_gram(SpaceKind::RegularPart, c, Weight::fubini_study(c), 2, default_grid());
  // int |zeta|^{2k} (1 + |zeta|^2 + |zeta|^6)^{-2} W dlambda, by 30-digit 1D quadrature.
  const double expected[] = {0.55946036658132400, 0.26361383401268669, 0.20037267315396094, 0.20029106006759654,
                             0.25096560184094154, 0.39422514319805005, 0.81042596842226554, 2.5489463127026042};
  ASSERT_EQ(s.gram().rows(), 8);
  for (int k = 0; k < 8; ++k) {
    EXPECT_NEAR(s.gram()(k, k).real(), expected[k], 1e-8 * expected[k]) << k;
    for (int j = 0; j < 8; ++j)
      if (j != k) EXPECT_LT(std::abs(s.gram()(j, k)), 1e-12);
  }
}

TEST(Gram, Dimensions) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  EXPECT_EQ(fs_space(c, SpaceKind::WeaklyHolomorphic, 2).dim(), 7);
  EXPECT_EQ(fs_space(c, SpaceKind::RegularPart, 2).dim(), 8);
  EXPECT_EQ(fs_space(c, SpaceKind::Restriction, 2).dim(), 6);
  const auto r = fs_space(c, SpaceKind::RegularPart, 2);
  EXPECT_TRUE(r.excluded_degrees().empty());
  EXPECT_EQ(r.top_degree(), 7);
}

TEST(Gram, GramIsHermitianForGeneralCurve) {
  const auto c = test::monic_curve(3, {Complex(0.4, -0.2), 0.7});
  const auto s = assemble_gram(SpaceKind::WeaklyHolomorphic, c, Weight::fubini_study(c), 3, default_grid());
  EXPECT_LT((s.gram() - s.gram().adjoint()).cwiseAbs().maxCoeff(), 1e-15 * s.gram().cwiseAbs().maxCoeff());
}

TEST(Orthonormalize, BasisIsOrthonormal) {
  const auto c = test::monic_curve(3, {Complex(0.4, -0.2), 0.7});
  for (auto kind : {SpaceKind::WeaklyHolomorphic, SpaceKind::RegularPart, SpaceKind::Restriction}) {
    const auto s = fs_space(c, kind, 3);
    const MatrixXc b = s.basis_coeffs();
    const MatrixXc check = b.adjoint() * s.gram() * b;
    EXPECT_LT((check - MatrixXc::Identity(s.dim(), s.dim())).cwiseAbs().maxCoeff(), 1e-10) << to_string(kind);
    EXPECT_LT(s.orthonormality_residual(), 1e-10);
  }
}

TEST(Orthonormalize, DiagonalCaseIsInverseSquareRoot) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  const auto s = fs_space(c, SpaceKind::WeaklyHolomorphic, 2);
  const MatrixXc b = s.basis_coeffs();
  for (int k = 0; k < s.dim(); ++k) {
    EXPECT_NEAR(std::abs(b(k, k)), 1.0 / std::sqrt(s.gram()(k, k).real()), 1e-12 * std::abs(b(k, k)));
    EXPECT_LT(b.col(k).cwiseAbs().sum() - std::abs(b(k, k)), 1e-12 * std::abs(b(k, k)));
  }
  EXPECT_NEAR(s.condition_number(), 1.0, 1e-10);
}

TEST(Restriction, SpansGeneratorsOfTheAmbientSpace) {
  const auto c = test::monic_curve(3, {0.5, Complex(0, 1)});
  const auto s = fs_space(c, SpaceKind::Restriction, 2);
  ASSERT_EQ(s.dim(), 6);
  // Each generator zeta^a P^c, a + c <= 2, lies in the span of the basis.
  const MatrixXc gens = restricted_space_generators(c, 2);
  const MatrixXc b = s.basis_coeffs();
  for (Eigen::Index col = 0; col < gens.cols(); ++col) {
    const VectorXc g = gens.col(col);
    const VectorXc coords = b.adjoint() * s.gram() * g;
    EXPECT_LT((b * coords - g).norm(), 1e-9 * g.norm()) << col;
  }
}

TEST(Kernel, VariationalCharacterization) {
  const auto c = test::monic_curve(3, {Complex(0.3, 0.1)});
  const auto s = fs_space(c, SpaceKind::RegularPart, 3);
  const MatrixXc b = s.basis_coeffs();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (Complex z : {Complex(0.4, 0.3), Complex(-1.5, 0.8), Complex(0.0, -3.0)}) {
    const double p_value = kernel_at(s, z);
    const double e = std::exp(-2.0 * s.p() * s.weight()(z));
    // |s(z)|^2 e^{-2p phi} for s = sum x_j S_j with |x| = 1.
    auto value = [&](const VectorXc& x) {
      const VectorXc poly = b * x;
      Complex v = 0;
      for (Eigen::Index k = poly.size() - 1; k >= 0; --k) v = v * z + poly(k);
      return std::norm(v) * e;
    };
    for (int trial = 0; trial < 10000; ++trial) {
      VectorXc x(s.dim());
      for (auto& xi : x) xi = Complex(normal(rng), normal(rng));
      x.normalize();
      ASSERT_LE(value(x), p_value * (1 + 1e-10));
    }
    // The extremal section is x_j = conj(S_j(z)) / |S(z)|.
    VectorXc monomials(s.top_degree() + 1);
    Complex power = 1;
    for (auto& m : monomials) {
      m = power;
      power *= z;
    }
    VectorXc x = (b.transpose() * monomials).conjugate();
    x.normalize();
    EXPECT_NEAR(value(x), p_value, 1e-10 * p_value);
  }
}

TEST(Kernel, IndependentOfOrthonormalBasis) {
  const auto c = test::monic_curve(3, {Complex(0.3, 0.1), 0.2});
  const auto s = fs_space(c, SpaceKind::WeaklyHolomorphic, 3);
  const auto rotated = s.rotated(random_unitary(s.dim(), 5));
  for (Complex z : {Complex(0.1, 0.2), Complex(2.0, -1.0), Complex(-30.0, 4.0)})
    EXPECT_NEAR(log_kernel_at(rotated, z), log_kernel_at(s, z), 1e-11);
}

TEST(Kernel, RadialForRadialData) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  const auto s = fs_space(c, SpaceKind::RegularPart, 4);
  for (double r : {0.2, 1.0, 7.0}) {
    const double ref = log_kernel_at(s, r);
    for (double t : {0.3, 2.0, 5.1}) EXPECT_NEAR(log_kernel_at(s, std::polar(r, t)), ref, 1e-11);
  }
}

TEST(Kernel, TraceEqualsDimension) {
  const auto c = test::monic_curve(3, {Complex(0.3, 0.1), 0.2});
  for (auto kind : {SpaceKind::WeaklyHolomorphic, SpaceKind::RegularPart, SpaceKind::Restriction}) {
    const auto s = fs_space(c, kind, 2);
    const auto trace = integrate(*default_grid(), [&](Complex z) {
      return Complex(std::exp(log_kernel_at(s, z) + log_fs_pullback_density(c, z)));
    });
    EXPECT_NEAR(trace.value.real(), s.dim(), 1e-5) << to_string(kind);
  }
}

TEST(Kernel, NestedSpacesAreDominated) {
  const auto c = test::monic_curve(3, {0.0, Complex(0.5, 0.5)});
  const auto restriction = fs_space(c, SpaceKind::Restriction, 3);
  const auto w = fs_space(c, SpaceKind::WeaklyHolomorphic, 3);
  const auto regular = fs_space(c, SpaceKind::RegularPart, 3);
  for (Complex z : {Complex(0.0), Complex(0.7, -0.2), Complex(3.0, 3.0), Complex(-50.0, 1.0)}) {
    EXPECT_LE(log_kernel_at(restriction, z), log_kernel_at(w, z) + 1e-10);
    EXPECT_LE(log_kernel_at(w, z), log_kernel_at(regular, z) + 1e-10);
  }
}

TEST(Kernel, WeightPole) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  SingularParts parts;
  parts.atoms.push_back({Complex(0.0), 0.25, false});
  const auto w = Weight::custom(
      3, [](Complex z) { return 1.375 * std::log1p(std::norm(z)) + 0.25 * std::log(std::abs(z)); }, parts);
  const auto s = build_space(SpaceKind::WeaklyHolomorphic, c, w, 1, default_grid());
  EXPECT_TRUE(std::isfinite(log_kernel_at(s, Complex(0.2))));
  try {
    log_kernel_at(s, Complex(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WeightPole);
  }
}

TEST(FsMeasure, ExactAndDifferencedDensitiesAgree) {
  const auto c = test::monic_curve(3, {Complex(0.3, 0.1), 0.2});
  const auto s = fs_space(c, SpaceKind::RegularPart, 3);
  const auto curv = curvature_measure(s.weight(), c, *default_grid());
  for (Complex z : {Complex(0.1, 0.2), Complex(0.9, -0.4), Complex(-2.0, 1.5)}) {
    const double exact = fs_density_exact(s, z);
    const double fd = fs_density_fd(s, curv, z);
    EXPECT_NEAR(fd, exact, 1e-4 * std::max(1.0, std::abs(exact))) << z;
  }
}

TEST(FsMeasure, MassAndAtom) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  const int p = 4;
  const auto w = fs_measure_summary(fs_space(c, SpaceKind::WeaklyHolomorphic, p), *default_grid());
  EXPECT_DOUBLE_EQ(w.atom_at_x1, 0.0);
  EXPECT_NEAR(w.total_mass, p * 3.0, 1e-3);
  const auto r = fs_measure_summary(fs_space(c, SpaceKind::RegularPart, p), *default_grid());
  EXPECT_DOUBLE_EQ(r.atom_at_x1, -1.0);
  EXPECT_NEAR(r.smooth_mass, p * 3.0 + 1.0, 1e-3);
  EXPECT_NEAR(r.total_mass, p * 3.0, 1e-3);
  EXPECT_FALSE(r.exact_route);

  const auto lp = Weight::log_plus(3);
  const auto grid = std::make_shared<const QuadratureGrid>(grid_for_weight(lp, {}));
  const auto l = fs_measure_summary(build_space(SpaceKind::WeaklyHolomorphic, c, lp, p, grid), *grid);
  EXPECT_TRUE(l.exact_route);
  EXPECT_NEAR(l.total_mass, p * 3.0, 1e-3);
  EXPECT_GE(l.min_density, 0.0);
}

TEST(LogKernel, L1DecreasesWithLevel) {
  for (int d : {2, 3}) {
    const auto c = test::monic_curve(d);
    double previous = INFINITY;
    for (int p : {2, 4, 8}) {
      const double l1 = log_kernel_l1(fs_space(c, SpaceKind::WeaklyHolomorphic, p), *default_grid());
      EXPECT_LT(l1, previous) << "d=" << d << " p=" << p;
      previous = l1;
    }
  }
}

TEST(Errors, InvalidLevelAndCoarseAngularGrid) {
  const auto c = new_curve({1, 0, 0, 0}, 3);
  EXPECT_THROW(fs_space(c, SpaceKind::WeaklyHolomorphic, 0), Error);
  const auto coarse = std::make_shared<const QuadratureGrid>(build_grid(64, 32));
  try {
    build_space(SpaceKind::RegularPart, c, Weight::fubini_study(c), 11, coarse);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ResolutionTooLow);
  }
}

TEST(Errors, DivergentNormEntry) {
  // e^{-2p phi} = |zeta|^{-6p} near 0: the constant section has infinite norm.
  const auto c = new_curve({1, 0, 0, 0}, 3);
  SingularParts parts;
  parts.atoms.push_back({Complex(0.0), 3.0, false});
  const auto w = Weight::custom(3, [](Complex z) { return 3.0 * std::log(std::abs(z)); }, parts);
  try {
    build_space(SpaceKind::WeaklyHolomorphic, c, w, 1, default_grid());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DivergentNormEntry);
  }
}

TEST(Errors, IllConditioned) {
  // The measure concentrates near zeta = 1, where high monomials are nearly dependent.
  const auto c = new_curve({1, 0, 0, 0}, 3);
  const auto w = Weight::custom(3, [](Complex z) { return 1.5 * std::log1p(std::norm(z - 1.0)); });
  const auto fine = std::make_shared<const QuadratureGrid>(build_grid(512, 256));
  EXPECT_NO_THROW(build_space(SpaceKind::WeaklyHolomorphic, c, w, 2, fine));
  try {
    build_space(SpaceKind::WeaklyHolomorphic, c, w, 8, fine);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllConditioned);
  }
}

}  // namespace
}  // namespace bergman
