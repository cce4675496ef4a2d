#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "bergman/bergman_space.hpp"
#include "bergman/random_zeros.hpp"

namespace bergman {

/**
 * Fixed family of test sets for comparing measures on C:
 * 64 centred disks |zeta| < R with R geometric in [1e-2, 1e2],
 * 32 sectors theta in [2 pi k/32, 2 pi (k+1)/32),
 * 32 annuli r_k <= |zeta| < r_{k+1} with 33 geometric edges in [1e-2, 1e2].
 */
struct TestSetFamily {
  std::vector<double> disk_radii;
  std::vector<double> sector_edges;
  std::vector<double> annulus_edges;

  static const TestSetFamily& standard();
  std::size_t size() const { return disk_radii.size() + (sector_edges.size() - 1) + (annulus_edges.size() - 1); }
};

/**
 * A measure reduced to its masses on the standard test sets. The atom at x1
 * lies outside every set in C and only enters total_mass.
 */
struct MeasureSummary {
  std::vector<double> set_masses;
  double x1_mass = 0.0;
  double total_mass = 0.0;
};

MeasureSummary summarize_atoms(std::span<const std::pair<Complex, double>> atoms, double x1_mass = 0.0);

/**
 * Masses of density dlambda + circles + atoms on the test sets. The density
 * is integrated on a polar product grid whose cells tile every test set:
 * composite Gauss-Legendre in log r between the test radii (over
 * log r in [-14, 14]) and in theta per sector.
 */
MeasureSummary summarize_density(const std::function<double(Complex)>& density,
                                 std::span<const CircleComponent> circles = {},
                                 std::span<const AtomComponent> atoms = {}, double x1_mass = 0.0);

MeasureSummary summarize(const CurvatureMeasure& curvature);
MeasureSummary summarize(const ExpectedDivisor& divisor);
//! gamma_p / p, from the closed-form density, with its signed atom at x1.
MeasureSummary summarize_fs_measure(const BergmanSpace& space);

//! Largest absolute mass difference over the test sets; MassMismatch if totals differ by more than 1e-6.
double discrepancy(const MeasureSummary& a, const MeasureSummary& b);

//! Gauss-Legendre rule with n nodes on [a, b].
Rule1D gauss_legendre_rule(double a, double b, int n);

/**
 * Vanishing order of a curvature density at the point over x1. In the chart
 * t = 1/zeta the density becomes rho(1/t) / |t|^4; the order is the
 * least-squares slope of its log against log|t| on [t_inner, t_outer],
 * averaged over 16 angles. r = order + 2.
 */
struct VanishingOrderFit {
  double order = 0.0;
  double r = 2.0;
  double t_inner = 1e-3;
  double t_outer = 1e-2;
};

//! log_density(zeta) returns log rho(zeta); taking logs avoids underflow of rho near x1.
VanishingOrderFit curvature_vanishing_order(const std::function<double(Complex)>& log_density,
                                            double t_inner = 1e-3, double t_outer = 1e-2);

//! Minimum of P over |zeta| <= radius, sampled on a polar grid (n_radial x n_angular, centre included).
double min_kernel(const BergmanSpace& space, double radius = 2.0, int n_radial = 24, int n_angular = 48);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

//! Least squares y = slope x + intercept; IllConditioned for fewer than two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct KernelGrowth {
  std::vector<int> p_ladder;
  std::vector<double> min_kernel;
  //! Slope of log min_kernel against log p.
  double slope = 0.0;
  VanishingOrderFit vanishing;
  //! 2 / r.
  double bound = 0.0;
};

/**
 * Kernel growth on the WeaklyHolomorphic spaces of a smooth weight (FS or
 * smooth radial) over a ladder of at least four levels, and the exponent
 * 2/r from the vanishing order of the pulled-back curvature.
 */
KernelGrowth kernel_growth_exponent(const PlaneCurve& curve, const Weight& weight, std::span<const int> p_ladder,
                                    const QuadratureParams& params, double eval_radius = 2.0);

//! (1/p) int |log|s|_{h_p}| W dlambda.
double potential_l1(const BergmanSpace& space, const RandomSection& section, const QuadratureGrid& grid);

//! (1/p) int |log P| W dlambda for an arbitrary log-kernel.
double log_kernel_l1(const std::function<double(Complex)>& log_kernel, const PlaneCurve& curve,
                     const QuadratureGrid& grid, int p);

struct KindSeries {
  SpaceKind kind = SpaceKind::WeaklyHolomorphic;
  std::vector<double> l1_log_kernel;
  //! Discrepancy of gamma_p / p against c1.
  std::vector<double> fs_discrepancy;
  //! Signed atom of gamma_p at x1 (before dividing by p).
  std::vector<double> x1_atom;
  std::vector<int> dims;
  std::vector<double> condition_numbers;
  bool pass = false;
};

struct ConvergenceReport {
  std::vector<int> p_ladder;
  std::vector<KindSeries> kinds;
  //! Random-section series on the first kind; empty when no samples were requested.
  std::vector<double> potential_l1;
  std::vector<double> discrepancy;
  std::vector<double> min_kernel;
  double fitted_exponent = 0.0;
  bool pass = false;
};

//! Both series decrease by at least a factor 2 from the first rung to the last.
bool decreases_by_factor(std::span<const double> series, double factor = 2.0);

/**
 * Per space kind and level: L1 norm of log P and the discrepancy of
 * gamma_p / p against c1. PASS iff every series passes decreases_by_factor.
 * With n_samples > 0 also fills the random-section series for kinds[0].
 */
ConvergenceReport run_convergence(const PlaneCurve& curve, const Weight& weight, std::span<const SpaceKind> kinds,
                                std::span<const int> p_ladder, const QuadratureParams& params, int n_samples = 0,
                                std::uint64_t seed = 0, double eval_radius = 2.0);

}  // namespace bergman
