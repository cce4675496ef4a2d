#include "bergman/curve.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/errors.hpp"
#include "bergman/polynomial.hpp"

namespace bergman {

ProjectivePoint ProjectivePoint::normalized() const {
  std::size_t pivot = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (std::abs(z[i]) > std::abs(z[pivot])) pivot = i;
  if (std::abs(z[pivot]) == 0.0) throw Error(ErrorKind::BothZero, "projective point with all coordinates zero");
  ProjectivePoint out;
  for (std::size_t i = 0; i < 3; ++i) out.z[i] = z[i] / z[pivot];
  out.z[pivot] = 1.0;
  return out;
}

bool ProjectivePoint::equivalent(const ProjectivePoint& other, double tol) const {
  const auto a = normalized();
  const auto b = other.normalized();
  // Pivots may differ when two coordinates tie in modulus; compare in a's pivot chart.
  std::size_t pivot = 0;
  for (std::size_t i = 0; i < 3; ++i)
    if (a.z[i] == Complex{1.0}) pivot = i;
  if (std::abs(b.z[pivot]) < 0.5) return false;
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(a.z[i] - b.z[i] / b.z[pivot]) > tol) return false;
  return true;
}

PlaneCurve::PlaneCurve(std::vector<Complex> homogeneous_coeffs, int degree)
    : degree_(degree), a_(std::move(homogeneous_coeffs)) {
  if (degree_ < 2) throw Error(ErrorKind::DegreeTooSmall, "curve degree must be at least 2, got " + std::to_string(degree_));
  if (a_.size() != static_cast<std::size_t>(degree_) + 1)
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(degree_ + 1) + " coefficients, got " +
                                                std::to_string(a_.size()));
  if (a_.front() == Complex{0.0}) throw Error(ErrorKind::ZeroLeadingCoefficient, "a0 must be nonzero");
  for (const auto& c : a_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorKind::InvalidArgument, "non-finite curve coefficient");

  // Q(1, zeta) = sum_j a_j zeta^{d-j}
  p_.resize(degree_ + 1);
  for (int j = 0; j <= degree_; ++j) p_(degree_ - j) = a_[j];
  dp_ = derivative(p_);
}

Complex PlaneCurve::p(Complex zeta) const { return horner(p_, zeta); }

Complex PlaneCurve::dp(Complex zeta) const { return horner(dp_, zeta); }

Complex PlaneCurve::q(Complex t0, Complex t1) const {
  Complex acc{0};
  for (int j = 0; j <= degree_; ++j) acc += a_[j] * std::pow(t0, j) * std::pow(t1, degree_ - j);
  return acc;
}

bool PlaneCurve::is_radial() const {
  for (int j = 1; j <= degree_; ++j)
    if (a_[j] != Complex{0.0}) return false;
  return true;
}

ProjectivePoint normalize_point(const PlaneCurve& curve, Complex t0, Complex t1) {
  if (t0 == Complex{0.0} && t1 == Complex{0.0}) throw Error(ErrorKind::BothZero, "normalization at [0:0]");
  const int d = curve.degree();
  return {{std::pow(t0, d), std::pow(t0, d - 1) * t1, curve.q(t0, t1)}};
}

double log_fs_pullback_density(const PlaneCurve& curve, Complex zeta) {
  const auto [p, dp] = horner_with_derivative(curve.p_coeffs(), zeta);
  const Complex twist = zeta * dp - p;

  const double ma = std::max({1.0, std::abs(zeta), std::abs(p)});
  const double a = 1.0 / (ma * ma) + std::norm(zeta / ma) + std::norm(p / ma);
  const double mn = std::max({1.0, std::abs(dp), std::abs(twist)});
  const double n = 1.0 / (mn * mn) + std::norm(dp / mn) + std::norm(twist / mn);

  return std::log(n) + 2.0 * std::log(mn) - 2.0 * (std::log(a) + 2.0 * std::log(ma)) - std::log(kPi);
}

double fs_pullback_density(const PlaneCurve& curve, Complex zeta) {
  const auto [p, dp] = horner_with_derivative(curve.p_coeffs(), zeta);
  const Complex twist = zeta * dp - p;
  const double a = 1.0 + std::norm(zeta) + std::norm(p);
  const double n = 1.0 + std::norm(dp) + std::norm(twist);
  if (std::isfinite(a * a)) return n / (kPi * a * a);
  return std::exp(log_fs_pullback_density(curve, zeta));
}

MatrixXc restricted_space_generators(const PlaneCurve& curve, int p) {
  if (p < 1) throw Error(ErrorKind::InvalidArgument, "level p must be >= 1");
  const int d = curve.degree();
  const int rows = d * p + 1;
  const int count = (p + 1) * (p + 2) / 2;
  MatrixXc out = MatrixXc::Zero(rows, count);

  VectorXc power = VectorXc::Ones(1);  // P^c
  int col = 0;
  for (int c = 0; c <= p; ++c) {
    for (int a = 0; a + c <= p; ++a, ++col) out.col(col).segment(a, power.size()) = power;
    power = multiply(power, curve.p_coeffs());
  }
  return out;
}

namespace {

MatrixXc normalize_columns(const MatrixXc& columns) {
  MatrixXc scaled = columns;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) {
    const double n = scaled.col(j).norm();
    if (n > 0) scaled.col(j) /= n;
  }
  return scaled;
}

}  // namespace

Eigen::Index numerical_rank(const MatrixXc& columns, double rel_tol) {
  if (columns.size() == 0) return 0;
  Eigen::JacobiSVD<MatrixXc> svd(normalize_columns(columns));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0)) return 0;
  return (sv.array() > rel_tol * sv(0)).count();
}

MatrixXc column_space_basis(const MatrixXc& columns, double rel_tol) {
  Eigen::JacobiSVD<MatrixXc> svd(normalize_columns(columns), Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const Eigen::Index rank = (sv.size() == 0 || !(sv(0) > 0)) ? 0 : (sv.array() > rel_tol * sv(0)).count();
  return svd.matrixU().leftCols(rank);
}

int restricted_space_rank(const PlaneCurve& curve, int p) {
  return static_cast<int>(numerical_rank(restricted_space_generators(curve, p)));
}

}  // namespace bergman
