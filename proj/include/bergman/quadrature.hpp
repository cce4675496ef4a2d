#pragma once

#include <cmath>
#include <vector>

#include "bergman/errors.hpp"
#include "bergman/parallel.hpp"
#include "bergman/types.hpp"

namespace bergman {

struct QuadratureParams {
  int n_radial = 256;
  int n_angular = 128;
  std::vector<double> split_radii;
  double s_min = -14.0;
  double s_max = 14.0;
};

//! One-dimensional rule on [a, b].
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
};

//! Closed trapezoid rule with n equispaced nodes.
Rule1D trapezoid_rule(double a, double b, int n);

//! Trapezoid in u with s = sinh(u), s in [a, b]: nodes cluster near s = 0.
Rule1D sinh_trapezoid_rule(double a, double b, int n);

//! Double-exponential (tanh-sinh) rule with n nodes, exact endpoint handling.
Rule1D tanh_sinh_rule(double a, double b, int n);

//! Equispaced periodic rule on [0, 2pi).
Rule1D periodic_rule(int n);

/**
 * Polar product rule for integrals over C against Lebesgue measure.
 *
 * The radial direction uses s = log r, so that dlambda = r^2 ds dtheta.
 * Without split radii the radial rule is a truncated trapezoid in
 * u = asinh(s) on [s_min, s_max], which resolves the peaked integrands of
 * large p near |zeta| ~ 1 while still reaching far into both tails; with
 * split radii each piece between consecutive splits
 * gets its own tanh-sinh rule, which stays exponentially accurate when the
 * integrand has a kink at the split.
 */
class QuadratureGrid {
 public:
  explicit QuadratureGrid(QuadratureParams params);

  const QuadratureParams& params() const { return params_; }
  int n_radial() const { return params_.n_radial; }
  int n_angular() const { return params_.n_angular; }
  const std::vector<double>& split_radii() const { return params_.split_radii; }
  double s_min() const { return params_.s_min; }
  double s_max() const { return params_.s_max; }

  Eigen::Index radial_size() const { return static_cast<Eigen::Index>(log_radius_.size()); }
  Eigen::Index size() const { return radial_size() * params_.n_angular; }

  double log_radius(Eigen::Index i) const { return log_radius_[i]; }
  double radius(Eigen::Index i) const { return radius_[i]; }
  //! ds-weight times r^2.
  double radial_weight(Eigen::Index i) const { return radial_weight_[i]; }
  double angle(Eigen::Index j) const { return angle_[j]; }
  double angular_weight() const { return kTwoPi / params_.n_angular; }
  const Eigen::VectorXcd& unit_phases() const { return phase_; }

  //! Flat node k = i * n_angular + j.
  Complex node(Eigen::Index k) const {
    return radius_[k / params_.n_angular] * phase_(k % params_.n_angular);
  }
  double weight(Eigen::Index k) const { return radial_weight_[k / params_.n_angular] * angular_weight(); }
  VectorXc nodes() const;
  VectorXr weights() const;

  //! Same per-piece node counts (trapezoid spacing in u kept) on a wider log-radial window.
  QuadratureGrid with_truncation(double s_min, double s_max) const;
  //! Doubles n_radial and n_angular.
  QuadratureGrid refined() const;

 private:
  QuadratureParams params_;
  std::vector<double> log_radius_;
  std::vector<double> radius_;
  std::vector<double> radial_weight_;
  std::vector<double> angle_;
  Eigen::VectorXcd phase_;
};

//! Validates parameters (ResolutionTooLow, InvalidArgument) and builds the grid.
QuadratureGrid build_grid(int n_radial, int n_angular, std::vector<double> split_radii = {}, double s_min = -14.0,
                          double s_max = 14.0);
QuadratureGrid build_grid(const QuadratureParams& params);

struct IntegrationResult {
  Complex value{};
  Eigen::Index excluded = 0;
  //! Bound on the truncated tails, from a power-law envelope fitted at the outer and inner rings.
  double tail_estimate = 0.0;
};

/**
 * sum_k w_k f(zeta_k). Nodes where f is not finite are skipped and counted;
 * throws TooManyExcludedNodes past max_excluded_fraction. Per-ring partial
 * sums are accumulated in ring order, so the value does not depend on the
 * thread count.
 */
template <typename F>
IntegrationResult integrate(const QuadratureGrid& grid, F&& f, double max_excluded_fraction = 1e-3) {
  const Eigen::Index rings = grid.radial_size();
  const int n_theta = grid.n_angular();
  std::vector<Complex> ring_sum(rings);
  std::vector<double> ring_abs(rings);
  std::vector<Eigen::Index> ring_excluded(rings, 0);

  parallel_for(rings, [&](std::ptrdiff_t i) {
    CompensatedSum<Complex> acc;
    double abs_acc = 0.0;
    const double r = grid.radius(i);
    for (int j = 0; j < n_theta; ++j) {
      const Complex value = f(r * grid.unit_phases()(j));
      if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        ++ring_excluded[i];
        continue;
      }
      acc.add(value);
      abs_acc += std::abs(value);
    }
    ring_sum[i] = acc.value() * grid.radial_weight(i) * grid.angular_weight();
    ring_abs[i] = abs_acc * grid.angular_weight() * grid.radius(i) * grid.radius(i);
  });

  IntegrationResult out;
  CompensatedSum<Complex> total;
  for (Eigen::Index i = 0; i < rings; ++i) {
    total.add(ring_sum[i]);
    out.excluded += ring_excluded[i];
  }
  out.value = total.value();
  // Integrand in s behaves like e^{-2|s|} beyond the window for all in-scope integrands.
  out.tail_estimate = 0.5 * (ring_abs.front() + ring_abs.back());

  if (static_cast<double>(out.excluded) > max_excluded_fraction * static_cast<double>(grid.size()))
    throw Error(ErrorKind::TooManyExcludedNodes,
                std::to_string(out.excluded) + " of " + std::to_string(grid.size()) + " nodes excluded");
  return out;
}

//! Values of an integral under successively wider truncation windows.
struct SelfRefinement {
  std::vector<double> s_max;
  std::vector<Complex> values;
  bool converged = false;
};

/**
 * Integrates f on the grid truncated at s_max, s_max + step, ... (levels
 * windows). Converged iff consecutive values agree to rel_tol; a divergent
 * tail shows up as values that keep growing.
 */
template <typename F>
SelfRefinement self_refinement(const QuadratureGrid& grid, F&& f, int levels = 3, double step = 4.0,
                               double rel_tol = 1e-8) {
  SelfRefinement out;
  out.converged = true;
  for (int l = 0; l < levels; ++l) {
    const double top = grid.s_max() + step * l;
    const auto g = l == 0 ? grid : grid.with_truncation(grid.s_min(), top);
    out.s_max.push_back(top);
    out.values.push_back(integrate(g, f, 1.0).value);
    if (l > 0) {
      const Complex a = out.values[l - 1];
      const Complex b = out.values[l];
      if (std::abs(b - a) > rel_tol * std::max(std::abs(a), std::abs(b))) out.converged = false;
    }
  }
  return out;
}

}  // namespace bergman
