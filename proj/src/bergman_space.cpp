#include "bergman/bergman_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bergman/parallel.hpp"

namespace bergman {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::WeaklyHolomorphic: return "w";
    case SpaceKind::RegularPart: return "regular";
    case SpaceKind::Restriction: return "restriction";
  }
  return "unknown";
}

SpaceKind parse_space_kind(const std::string& name) {
  if (name == "w") return SpaceKind::WeaklyHolomorphic;
  if (name == "regular") return SpaceKind::RegularPart;
  if (name == "restriction") return SpaceKind::Restriction;
  throw Error(ErrorKind::Config, "unknown space kind '" + name + "' (expected w, regular or restriction)");
}

namespace {

constexpr double kAdmissionTolerance = 1e-8;
constexpr double kConditionCap = 1e12;
constexpr double kWindowExtension = 4.0;

// Angular Fourier moments of e^{-2p phi} W on every ring, stored relative to
// the ring maximum: F_i(m) = e^{-psi_i} sum_j w_theta e^{-2p phi} W e^{i m theta_j}.
struct RingMoments {
  std::vector<double> log_scale;  // psi_i + log(radial weight)
  std::vector<VectorXc> modes;
  Eigen::Index excluded = 0;
};

RingMoments ring_moments(const QuadratureGrid& grid, const PlaneCurve& curve, const Weight& weight, int p,
                         int max_mode) {
  const Eigen::Index rings = grid.radial_size();
  const int n_theta = grid.n_angular();
  RingMoments out;
  out.log_scale.resize(rings);
  out.modes.resize(rings);
  std::vector<Eigen::Index> excluded(rings, 0);

  parallel_for(rings, [&](std::ptrdiff_t i) {
    std::vector<double> psi(n_theta);
    double top = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_theta; ++j) {
      const Complex z = grid.radius(i) * grid.unit_phases()(j);
      const double phi = weight(z);
      psi[j] = -2.0 * p * phi + log_fs_pullback_density(curve, z);
      if (!std::isfinite(psi[j])) {
        ++excluded[i];
        continue;
      }
      top = std::max(top, psi[j]);
    }
    VectorXc modes = VectorXc::Zero(max_mode + 1);
    if (std::isfinite(top)) {
      for (int j = 0; j < n_theta; ++j) {
        if (!std::isfinite(psi[j])) continue;
        const double f = std::exp(psi[j] - top) * grid.angular_weight();
        const Complex step = grid.unit_phases()(j);
        Complex phase{1.0};
        for (int m = 0; m <= max_mode; ++m) {
          modes(m) += f * phase;
          phase *= step;
        }
      }
    }
    out.log_scale[i] = top + std::log(grid.radial_weight(i));
    out.modes[i] = std::move(modes);
  });
  for (auto e : excluded) out.excluded += e;
  return out;
}

// int conj(zeta^j) zeta^k (.) = sum_i exp((j + k) s_i + log_scale_i) F_i(k - j).
Complex moment(const QuadratureGrid& grid, const RingMoments& rings, int j, int k) {
  CompensatedSum<Complex> acc;
  const int m = k - j;
  for (Eigen::Index i = 0; i < grid.radial_size(); ++i) {
    if (!std::isfinite(rings.log_scale[i])) continue;
    const double scale = std::exp((j + k) * grid.log_radius(i) + rings.log_scale[i]);
    if (scale == 0.0) continue;
    const Complex mode = m >= 0 ? rings.modes[i](m) : std::conj(rings.modes[i](-m));
    acc.add(scale * mode);
  }
  return acc.value();
}

void check_excluded(const QuadratureGrid& grid, Eigen::Index excluded) {
  if (static_cast<double>(excluded) > 1e-3 * static_cast<double>(grid.size()))
    throw Error(ErrorKind::TooManyExcludedNodes,
                std::to_string(excluded) + " of " + std::to_string(grid.size()) + " nodes sit on weight poles");
}

}  // namespace

BergmanSpace assemble_gram(SpaceKind kind, const PlaneCurve& curve, const Weight& weight, int p,
                           std::shared_ptr<const QuadratureGrid> grid) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "level p must be >= 1");
  if (!grid) throw Error(ErrorKind::InvalidArgument, "missing quadrature grid");
  const int d = curve.degree();
  const int top = kind == SpaceKind::RegularPart ? regular_degree_cutoff(d, p) : d * p;
  if (grid->n_angular() <= top)
    throw Error(ErrorKind::ResolutionTooLow, "n_angular = " + std::to_string(grid->n_angular()) +
                                                 " cannot separate Fourier modes up to degree " +
                                                 std::to_string(top));

  BergmanSpace space(kind, curve, weight, p, grid);

  std::vector<int> candidates;
  for (int k = 0; k <= top; ++k)
    if (degree_is_integrable(k, d, p)) candidates.push_back(k);

  const RingMoments base = ring_moments(*grid, curve, weight, p, top);
  check_excluded(*grid, base.excluded);

  // Admission: the diagonal entry must be stable under a wider window on both ends.
  const auto wide = grid->with_truncation(grid->s_min() - kWindowExtension, grid->s_max() + kWindowExtension);
  const RingMoments wide_rings = ring_moments(wide, curve, weight, p, 0);
  for (int k : candidates) {
    const double a = moment(*grid, base, k, k).real();
    const double b = moment(wide, wide_rings, k, k).real();
    const bool ok = std::isfinite(a) && std::isfinite(b) && a > 0 &&
                    std::abs(a - b) <= kAdmissionTolerance * std::max(std::abs(a), std::abs(b));
    if (!ok || !space.excluded_.empty()) {
      space.excluded_.push_back(k);
    } else {
      space.degrees_.push_back(k);
    }
  }
  if (space.degrees_.empty()) throw Error(ErrorKind::DivergentNormEntry, "no monomial has finite norm");
  if (!space.excluded_.empty() && kind == SpaceKind::Restriction)
    throw Error(ErrorKind::DivergentNormEntry, "restriction space requires all degrees up to dp, degree " +
                                                   std::to_string(space.excluded_.front()) + " diverges");

  const auto n = static_cast<Eigen::Index>(space.degrees_.size());
  space.gram_.resize(n, n);
  space.log_norms_.resize(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a; b < n; ++b) {
      const Complex g = moment(*grid, base, space.degrees_[a], space.degrees_[b]);
      space.gram_(a, b) = g;
      space.gram_(b, a) = std::conj(g);
    }
    space.gram_(a, a) = space.gram_(a, a).real();
    space.log_norms_(a) = 0.5 * std::log(space.gram_(a, a).real());
  }

  if (kind == SpaceKind::Restriction) {
    const MatrixXc generators = restricted_space_generators(curve, p);
    const Eigen::Index rank = numerical_rank(generators);
    MatrixXc scaled = generators;
    for (Eigen::Index k = 0; k < scaled.rows(); ++k) scaled.row(k) *= std::exp(space.log_norms_(k));
    for (Eigen::Index c = 0; c < scaled.cols(); ++c) scaled.col(c).normalize();
    Eigen::JacobiSVD<MatrixXc> svd(scaled, Eigen::ComputeThinU);
    space.frame_ = svd.matrixU().leftCols(rank);
  } else {
    space.frame_ = MatrixXc::Identity(n, n);
  }
  return space;
}

BergmanSpace orthonormalize(BergmanSpace space) {
  const Eigen::Index n = space.gram_.rows();
  MatrixXc rescaled(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      rescaled(a, b) = space.gram_(a, b) * std::exp(-space.log_norms_(a) - space.log_norms_(b));

  MatrixXc framed = space.frame_.adjoint() * rescaled * space.frame_;
  framed = (0.5 * (framed + framed.adjoint())).eval();

  Eigen::SelfAdjointEigenSolver<MatrixXc> eig(framed, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  space.condition_number_ = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(lo > 0) || space.condition_number_ > kConditionCap)
    throw Error(ErrorKind::IllConditioned, "Gram condition number " + std::to_string(space.condition_number_) +
                                               " exceeds 1e12; use a smaller p or a finer grid");

  Eigen::LLT<MatrixXc> llt(framed);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::IllConditioned, "Gram matrix is not positive definite");
  const MatrixXc inv_adjoint =
      llt.matrixU().solve(MatrixXc::Identity(framed.rows(), framed.cols()));  // L^{-*}
  space.scaled_basis_ = space.frame_ * inv_adjoint;

  const MatrixXc check = space.scaled_basis_.adjoint() * rescaled * space.scaled_basis_;
  space.residual_ = (check - MatrixXc::Identity(check.rows(), check.cols())).cwiseAbs().maxCoeff();
  return space;
}

BergmanSpace build_space(SpaceKind kind, const PlaneCurve& curve, const Weight& weight, int p,
                         std::shared_ptr<const QuadratureGrid> grid) {
  return orthonormalize(assemble_gram(kind, curve, weight, p, std::move(grid)));
}

MatrixXc BergmanSpace::basis_coeffs() const {
  MatrixXc out = scaled_basis_;
  for (Eigen::Index a = 0; a < out.rows(); ++a) out.row(a) *= std::exp(-log_norms_(a));
  return out;
}

VectorXc BergmanSpace::section_coefficients(const VectorXc& coords) const {
  VectorXc out = scaled_basis_ * coords;
  for (Eigen::Index a = 0; a < out.size(); ++a) out(a) *= std::exp(-log_norms_(a));
  return out;
}

VectorXc BergmanSpace::weighted_monomials(Complex zeta, double& shift) const {
  const double phi = weight_(zeta);
  if (!std::isfinite(phi)) throw Error(ErrorKind::WeightPole, "weight is -infinity at the query point");
  const auto n = static_cast<Eigen::Index>(degrees_.size());
  VectorXc out = VectorXc::Zero(n);
  if (zeta == Complex{0.0}) {
    shift = -p_ * phi - log_norms_(0);
    out(0) = 1.0;
    return out;
  }
  const double log_r = std::log(std::abs(zeta));
  const double theta = std::arg(zeta);
  VectorXr logs(n);
  for (Eigen::Index a = 0; a < n; ++a) logs(a) = degrees_[a] * log_r - p_ * phi - log_norms_(a);
  shift = logs.maxCoeff();
  for (Eigen::Index a = 0; a < n; ++a) out(a) = std::polar(std::exp(logs(a) - shift), degrees_[a] * theta);
  return out;
}

BergmanSpace BergmanSpace::rotated(const MatrixXc& unitary) const {
  BergmanSpace out = *this;
  out.scaled_basis_ = scaled_basis_ * unitary;
  return out;
}

VectorXc basis_values(const BergmanSpace& space, Complex zeta, double& shift) {
  const VectorXc e = space.weighted_monomials(zeta, shift);
  return space.scaled_basis().transpose() * e;
}

double log_kernel_at(const BergmanSpace& space, Complex zeta) {
  double shift = 0.0;
  const VectorXc values = basis_values(space, zeta, shift);
  return 2.0 * shift + std::log(values.squaredNorm());
}

double kernel_at(const BergmanSpace& space, Complex zeta) { return std::exp(log_kernel_at(space, zeta)); }

double log_kernel_l1(const BergmanSpace& space, const QuadratureGrid& grid) {
  const auto& curve = space.curve();
  const auto& weight = space.weight();
  const auto result = integrate(grid, [&](Complex z) {
    if (!std::isfinite(weight(z))) return Complex(std::numeric_limits<double>::quiet_NaN());
    return Complex(std::abs(log_kernel_at(space, z)) * fs_pullback_density(curve, z));
  });
  return result.value.real() / space.p();
}

double fs_density_exact(const BergmanSpace& space, Complex zeta) {
  const auto& degrees = space.monomial_degrees();
  const auto n = static_cast<Eigen::Index>(degrees.size());
  if (n < 2) return 0.0;
  VectorXc e = VectorXc::Zero(n);
  VectorXc de = VectorXc::Zero(n);
  if (zeta == Complex{0.0}) {
    e(0) = std::exp(-space.log_norms()(0));
    de(1) = std::exp(-space.log_norms()(1));
  } else {
    // Any common factor cancels in dd^c log ||F||^2.
    double shift = 0.0;
    e = space.weighted_monomials(zeta, shift);
    for (Eigen::Index a = 0; a < n; ++a) de(a) = static_cast<double>(degrees[a]) / zeta * e(a);
  }
  const VectorXc f = space.scaled_basis().transpose() * e;
  const VectorXc df = space.scaled_basis().transpose() * de;
  const double norm2 = f.squaredNorm();
  // ||F||^2 ||F'||^2 - |<F, F'>|^2 = ||F||^2 ||F' - proj_F F'||^2
  const VectorXc g = df - (f.dot(df) / norm2) * f;
  return g.squaredNorm() / norm2 / kPi;
}

double fs_density_fd(const BergmanSpace& space, const CurvatureMeasure& curvature, Complex zeta) {
  const std::function<double(Complex)> log_p = [&space](Complex z) { return log_kernel_at(space, z); };
  return space.p() * curvature.density(zeta) + 0.5 * discrete_laplacian_density(log_p, zeta, laplacian_step(zeta));
}

FsMeasureSummary fs_measure_summary(const BergmanSpace& space, const QuadratureGrid& grid) {
  FsMeasureSummary out;
  out.exact_route = !space.weight().singular_parts().empty();
  std::optional<CurvatureMeasure> curvature;
  if (!out.exact_route) curvature = curvature_measure(space.weight(), space.curve(), grid);

  const Eigen::Index count = grid.size();
  out.points.resize(count);
  out.density.resize(count);
  parallel_for(grid.radial_size(), [&](std::ptrdiff_t i) {
    for (int j = 0; j < grid.n_angular(); ++j) {
      const Eigen::Index k = i * grid.n_angular() + j;
      const Complex z = grid.node(k);
      out.points[k] = z;
      const double gamma = out.exact_route ? fs_density_exact(space, z) : fs_density_fd(space, *curvature, z);
      out.density[k] = gamma / space.p();
    }
  });

  CompensatedSum<double> mass;
  CompensatedSum<double> negative;
  out.min_density = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < count; ++k) {
    const double gamma = out.density[k] * space.p();
    mass.add(gamma * grid.weight(k));
    if (gamma < 0) negative.add(gamma * grid.weight(k));
    out.min_density = std::min(out.min_density, out.density[k]);
  }
  out.smooth_mass = mass.value();
  out.negative_smooth_mass = negative.value();
  out.atom_at_x1 = space.p() * space.curve().degree() - space.top_degree();
  out.total_mass = out.smooth_mass + out.atom_at_x1;
  return out;
}

QuadratureGrid grid_for_weight(const Weight& weight, QuadratureParams params) {
  for (double r : weight.kink_radii()) params.split_radii.push_back(r);
  std::sort(params.split_radii.begin(), params.split_radii.end());
  params.split_radii.erase(std::unique(params.split_radii.begin(), params.split_radii.end()),
                           params.split_radii.end());
  return build_grid(params);
}

}  // namespace bergman
