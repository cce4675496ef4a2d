#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bergman/bergman_space.hpp"
#include "bergman/roots.hpp"

namespace bergman {

//! Engine for sample `index` of run `seed`; identical pairs give identical streams.
std::mt19937_64 section_engine(std::uint64_t seed, std::uint64_t index);

struct RandomSection {
  //! Unit vector in orthonormal coordinates.
  VectorXc coeffs;
  //! Monomial coefficients of s(zeta).
  VectorXc poly;
  int p = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
};

//! Uniform on the unit sphere: normalized complex standard Gaussian vector.
RandomSection sample_section(const BergmanSpace& space, std::uint64_t seed, std::uint64_t index);

struct ZeroAtom {
  Complex location;
  int multiplicity = 1;
};

/**
 * [div s]: zeros in C with multiplicities plus a signed integer atom at x1.
 * total_mass = sum of multiplicities + atom_at_x1 = p d.
 */
struct DivisorMeasure {
  std::vector<ZeroAtom> finite_atoms;
  int atom_at_x1 = 0;
  int total_mass = 0;
  int degree = 0;
};

/**
 * Zeros from the affine polynomial; the order at x1 is p d - deg s, the order
 * of sigma^* s at y = [0:1]. Degree is the largest index with
 * |coefficient| > 1e-12 max|coefficient|.
 */
DivisorMeasure divisor_of(const RandomSection& section, const RootOptions& options = {});

//! Averaged (1/p)[div s] over n seeded samples.
struct ExpectedDivisor {
  int p = 0;
  int d = 0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<DivisorMeasure> divisors;
  //! Averaged point masses in C: multiplicity / (p n).
  std::vector<std::pair<Complex, double>> atoms;
  //! Averaged mass at x1: mean atom_at_x1 / p.
  double x1_mass = 0.0;
  double total_mass = 0.0;

  //! Radius quantiles of the finite zeros at levels (i + 1) / (count + 1).
  std::vector<double> radial_quantiles(int count = 64) const;
  //! Mass of finite atoms with r_in < |zeta| < r_out, as a fraction of the finite mass.
  double annulus_fraction(double r_in, double r_out) const;

  struct AngularHistogram {
    std::vector<double> mean;            //!< per-bin fraction of finite zeros, averaged over samples
    std::vector<double> standard_error;  //!< standard error of that average
  };
  AngularHistogram angular_histogram(int bins = 32) const;
};

ExpectedDivisor expectation_divisor(const BergmanSpace& space, int n_samples, std::uint64_t seed,
                                    const RootOptions& options = {});

//! chi(zeta) = exp(-u / sigma^2) (1 + beta u / sigma^2) with u = |zeta|^2.
struct RadialTestFunction {
  double sigma = 1.0;
  double beta = 0.0;

  double value(double r) const;
  double laplacian(double r) const;
  //! Radius beyond which chi and its Laplacian are below 1e-18.
  double support_radius() const;
};

//! n test functions with sigma uniform in [0.5, 3] and beta uniform in [0, 1], from a stream independent of the samples.
std::vector<RadialTestFunction> random_test_functions(int n, std::uint64_t seed);

/**
 * Weak-form Lelong-Poincare residuals
 *   int chi d[div s] - p int chi dc1 - int log|s|_{h_p} dd^c chi
 * for each test function. dd^c chi = Delta chi / (2 pi) dlambda. The last
 * integral uses a dense polar midpoint rule on the disk containing the
 * supports (n_radial x n_angular nodes).
 */
std::vector<double> lelong_poincare_residuals(const BergmanSpace& space, const CurvatureMeasure& curvature,
                                              const RandomSection& section, const DivisorMeasure& divisor,
                                              std::span<const RadialTestFunction> tests, int n_radial = 4096,
                                              int n_angular = 1024);

}  // namespace bergman
