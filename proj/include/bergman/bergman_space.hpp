#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bergman/curve.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/**
 * WeaklyHolomorphic: polynomials of degree <= dp (also stands for the
 * continuous weakly holomorphic sections, which coincide on X_Q).
 * RegularPart: finite-norm polynomials of degree <= dp + d - 2.
 * Restriction: restrictions of sections of O(p) on P^2, spanned by zeta^a P^c.
 */
enum class SpaceKind { WeaklyHolomorphic, RegularPart, Restriction };

std::string to_string(SpaceKind kind);
//! Accepts "w", "regular", "restriction".
SpaceKind parse_space_kind(const std::string& name);

/**
 * Bergman space at level p. Sections are polynomials s(zeta) in the affine
 * chart with norm ||s||^2 = int |s|^2 e^{-2p phi} W dlambda.
 *
 * Internally monomials are rescaled to unit norm, e_k = zeta^k / sqrt(G_kk),
 * and the orthonormal basis is kept in those coordinates; this keeps the
 * factorization well conditioned even when the raw diagonal spans hundreds
 * of orders of magnitude. Immutable once orthonormalized.
 */
class BergmanSpace {
 public:
  SpaceKind kind() const { return kind_; }
  int p() const { return p_; }
  const PlaneCurve& curve() const { return curve_; }
  const Weight& weight() const { return weight_; }
  const QuadratureGrid& grid() const { return *grid_; }
  std::shared_ptr<const QuadratureGrid> grid_ptr() const { return grid_; }

  //! Degrees of the admitted monomials, ascending and contiguous from 0.
  const std::vector<int>& monomial_degrees() const { return degrees_; }
  //! Degrees dropped because their norm integral did not self-converge.
  const std::vector<int>& excluded_degrees() const { return excluded_; }
  int top_degree() const { return degrees_.empty() ? -1 : degrees_.back(); }

  //! G(j, k) = int conj(zeta^j) zeta^k e^{-2p phi} W dlambda, so ||sum x_k zeta^k||^2 = x^* G x.
  const MatrixXc& gram() const { return gram_; }
  //! 1/2 log G(k, k).
  const VectorXr& log_norms() const { return log_norms_; }
  //! Orthonormal (Euclidean) frame of the space in rescaled monomial coordinates.
  const MatrixXc& frame() const { return frame_; }

  int dim() const { return static_cast<int>(frame_.cols()); }
  bool has_basis() const { return scaled_basis_.size() > 0; }

  //! Columns: orthonormal basis in rescaled monomial coordinates.
  const MatrixXc& scaled_basis() const { return scaled_basis_; }
  //! Columns: orthonormal basis in monomial coordinates, B^* G B = I.
  MatrixXc basis_coeffs() const;
  //! Monomial coefficients (length top_degree + 1) of sum_j coords(j) S_j.
  VectorXc section_coefficients(const VectorXc& coords) const;

  double condition_number() const { return condition_number_; }
  double orthonormality_residual() const { return residual_; }

  /**
   * e_k(zeta) e^{-p phi(zeta)} divided by e^{shift}, where shift is the
   * largest log-modulus among the entries. Returns shift through the out
   * parameter. Throws WeightPole where phi = -infinity.
   */
  VectorXc weighted_monomials(Complex zeta, double& shift) const;

  //! Same space with basis C U for a unitary U.
  BergmanSpace rotated(const MatrixXc& unitary) const;

 private:
  friend BergmanSpace assemble_gram(SpaceKind, const PlaneCurve&, const Weight&, int,
                                    std::shared_ptr<const QuadratureGrid>);
  friend BergmanSpace orthonormalize(BergmanSpace);

  BergmanSpace(SpaceKind kind, PlaneCurve curve, Weight weight, int p, std::shared_ptr<const QuadratureGrid> grid)
      : kind_(kind), p_(p), curve_(std::move(curve)), weight_(std::move(weight)), grid_(std::move(grid)) {}

  SpaceKind kind_;
  int p_;
  PlaneCurve curve_;
  Weight weight_;
  std::shared_ptr<const QuadratureGrid> grid_;
  std::vector<int> degrees_;
  std::vector<int> excluded_;
  MatrixXc gram_;
  VectorXr log_norms_;
  MatrixXc frame_;
  MatrixXc scaled_basis_;
  double condition_number_ = 0.0;
  double residual_ = 0.0;
};

/**
 * Gram matrix over the admitted monomials. Candidate degrees are 0..dp
 * (0..dp+d-2 for RegularPart) filtered by degree arithmetic; each is then
 * admitted iff its diagonal entry is stable when the truncation window is
 * widened. Throws ResolutionTooLow if the angular resolution cannot
 * separate the required Fourier modes, DivergentNormEntry if a Restriction
 * space loses a degree.
 */
BergmanSpace assemble_gram(SpaceKind kind, const PlaneCurve& curve, const Weight& weight, int p,
                           std::shared_ptr<const QuadratureGrid> grid);

//! Cholesky factorization of the rescaled Gram matrix; throws IllConditioned above 1e12.
BergmanSpace orthonormalize(BergmanSpace space);

BergmanSpace build_space(SpaceKind kind, const PlaneCurve& curve, const Weight& weight, int p,
                         std::shared_ptr<const QuadratureGrid> grid);

//! Orthonormal basis values S_j(zeta) e^{-p phi(zeta)}, scaled by e^{-shift}.
VectorXc basis_values(const BergmanSpace& space, Complex zeta, double& shift);

//! P(zeta) = sum_j |S_j(zeta)|^2 e^{-2p phi(zeta)}.
double kernel_at(const BergmanSpace& space, Complex zeta);
double log_kernel_at(const BergmanSpace& space, Complex zeta);

//! (1/p) int |log P| W dlambda with W the pulled-back Fubini-Study density.
double log_kernel_l1(const BergmanSpace& space, const QuadratureGrid& grid);

//! Density of gamma_p = dd^c (1/2 log sum |s_j|^2) from the closed form of dd^c log of a norm.
double fs_density_exact(const BergmanSpace& space, Complex zeta);

//! Density of gamma_p as p c1 + (1/2) dd^c log P, with dd^c from the 5-point Laplacian.
double fs_density_fd(const BergmanSpace& space, const CurvatureMeasure& curvature, Complex zeta);

struct FsMeasureSummary {
  std::vector<Complex> points;
  //! Density of gamma_p / p at each point.
  std::vector<double> density;
  //! Mass of the smooth part of gamma_p over C.
  double smooth_mass = 0.0;
  //! Integral of the negative part of the sampled smooth density of gamma_p.
  double negative_smooth_mass = 0.0;
  double min_density = 0.0;
  //! Signed atom of gamma_p at x1: pd - top degree.
  double atom_at_x1 = 0.0;
  double total_mass = 0.0;
  //! True when the density came from the closed form rather than differencing.
  bool exact_route = false;
};

/**
 * Samples gamma_p / p on the grid nodes. Weights whose curvature has a
 * density use the differencing route; weights with declared singular parts
 * use the closed form, since differencing across a kink is meaningless.
 */
FsMeasureSummary fs_measure_summary(const BergmanSpace& space, const QuadratureGrid& grid);

//! Grid built from params with split radii added at the weight's kinks.
QuadratureGrid grid_for_weight(const Weight& weight, QuadratureParams params);

}  // namespace bergman
