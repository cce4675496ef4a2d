#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bergman/curve.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

enum class WeightKind { FubiniStudy, LogPlus, SmoothRadial, Custom };

std::string to_string(WeightKind kind);

//! Uniform measure of the given mass on the circle |zeta| = radius.
struct CircleComponent {
  double radius = 1.0;
  double mass = 0.0;
};

//! Point mass; at_x1 places it at the singular point instead of `location`.
struct AtomComponent {
  Complex location{};
  double mass = 0.0;
  bool at_x1 = false;
};

//! Singular part of a curvature measure together with its canonical potential.
struct SingularParts {
  std::vector<CircleComponent> circles;
  std::vector<AtomComponent> atoms;

  //! sum m log max(|zeta|, R) over circles plus sum m log|zeta - a| over finite atoms.
  double potential(Complex zeta) const;
  double mass() const;
  bool empty() const { return circles.empty() && atoms.empty(); }
};

/**
 * Weight phi of a singular Hermitian metric on O(1)|_X in the affine chart,
 * |e_0|^2_h = e^{-2 phi}. Admissible weights lie in d L(C): subharmonic with
 * phi <= d log+|zeta| + C.
 *
 * Weights are immutable; evaluation is pure and may return -infinity at
 * isolated poles.
 */
class Weight {
 public:
  static Weight fubini_study(const PlaneCurve& curve);
  static Weight log_plus(int d);
  //! phi(zeta) = profile(|zeta|); optional closed-form curvature density in r.
  static Weight smooth_radial(int d, std::function<double(double)> profile,
                              std::function<double(double)> density = {});
  //! 1/2 d log(1 + |zeta|^2), whose curvature is d/(pi (1 + |zeta|^2)^2).
  static Weight smooth_radial_fs(int d);
  static Weight custom(int d, std::function<double(Complex)> phi, SingularParts declared = {});

  WeightKind kind() const { return kind_; }
  int scale() const { return d_; }
  double operator()(Complex zeta) const { return phi_(zeta); }

  bool is_radial() const { return radial_; }
  const SingularParts& singular_parts() const { return singular_; }
  //! Radii where the weight has a kink; quadrature grids split there.
  std::vector<double> kink_radii() const;
  const std::optional<PlaneCurve>& curve() const { return curve_; }
  //! Closed-form curvature density if the weight has one.
  const std::function<double(Complex)>& exact_density() const { return exact_density_; }

 private:
  Weight() = default;

  WeightKind kind_ = WeightKind::Custom;
  int d_ = 0;
  bool radial_ = false;
  std::function<double(Complex)> phi_;
  std::function<double(Complex)> exact_density_;
  SingularParts singular_;
  std::optional<PlaneCurve> curve_;
};

//! 1/2 log(1 + |zeta|^2 + |P(zeta)|^2).
double fs_weight(const PlaneCurve& curve, Complex zeta);

//! d max(log|zeta|, 0).
double logplus_weight(int d, Complex zeta);

//! (1/2pi) times the 5-point Laplacian of f at zeta with spacing h.
double discrete_laplacian_density(const std::function<double(Complex)>& f, Complex zeta, double h);

//! Spacing used for curvature densities: 1e-3 relative to max(1, |zeta|).
inline double laplacian_step(Complex zeta) { return 1e-3 * std::max(1.0, std::abs(zeta)); }

/**
 * Estimates C_phi = sup phi - d log+|zeta| over circles of the given radii
 * (64 angles each). Throws GrowthViolation if the circle-wise supremum grows
 * by more than 1e-2 between the two largest radii.
 */
double growth_check(const Weight& w, int d, std::span<const double> radii);

struct CurvatureMeasure {
  std::function<double(Complex)> density;
  std::vector<CircleComponent> circles;
  std::vector<AtomComponent> atoms;
  double density_mass = 0.0;
  double total_mass = 0.0;
};

/**
 * Curvature dd^c phi split into a density, circles and atoms. Densities of
 * smooth radial and custom weights come from the discrete Laplacian of phi
 * minus the declared singular potential. Throws MassMismatch if the total
 * differs from d by more than 1e-3, ResolutionTooLow below 64x64.
 */
CurvatureMeasure curvature_measure(const Weight& w, const PlaneCurve& curve, const QuadratureGrid& grid);

}  // namespace bergman
