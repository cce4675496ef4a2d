#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bergman {

Rule1D trapezoid_rule(double a, double b, int n) {
  Rule1D rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double h = (b - a) / (n - 1);
  for (int k = 0; k < n; ++k) {
    rule.x[k] = a + h * k;
    rule.w[k] = (k == 0 || k == n - 1) ? 0.5 * h : h;
  }
  return rule;
}

Rule1D sinh_trapezoid_rule(double a, double b, int n) {
  const double u0 = std::asinh(a);
  const double u1 = std::asinh(b);
  const double h = (u1 - u0) / (n - 1);
  Rule1D rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int k = 0; k < n; ++k) {
    const double u = u0 + h * k;
    rule.x[k] = std::sinh(u);
    rule.w[k] = ((k == 0 || k == n - 1) ? 0.5 * h : h) * std::cosh(u);
  }
  return rule;
}

Rule1D tanh_sinh_rule(double a, double b, int n) {
  // 1 - tanh(pi/2 sinh T) is below 1e-16 at T = 3.2.
  constexpr double t_max = 3.2;
  const double h = 2.0 * t_max / (n - 1);
  const double half = 0.5 * (b - a);
  Rule1D rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int k = 0; k < n; ++k) {
    const double t = -t_max + h * k;
    const double u = 0.5 * kPi * std::sinh(t);
    const double cu = std::cosh(u);
    // Measure distance from the nearer endpoint to keep full relative accuracy there.
    rule.x[k] = t >= 0 ? b - (b - a) / (1.0 + std::exp(2.0 * u)) : a + (b - a) / (1.0 + std::exp(-2.0 * u));
    rule.w[k] = h * half * 0.5 * kPi * std::cosh(t) / (cu * cu);
  }
  return rule;
}

Rule1D periodic_rule(int n) {
  Rule1D rule;
  rule.x.resize(n);
  rule.w.assign(n, kTwoPi / n);
  for (int k = 0; k < n; ++k) rule.x[k] = kTwoPi * k / n;
  return rule;
}

QuadratureGrid::QuadratureGrid(QuadratureParams params) : params_(std::move(params)) {
  std::vector<double> edges{params_.s_min};
  for (double r : params_.split_radii) edges.push_back(std::log(r));
  edges.push_back(params_.s_max);

  auto append = [&](const Rule1D& rule) {
    for (std::size_t k = 0; k < rule.x.size(); ++k) {
      if (rule.w[k] == 0.0) continue;
      const double r = std::exp(rule.x[k]);
      log_radius_.push_back(rule.x[k]);
      radius_.push_back(r);
      radial_weight_.push_back(rule.w[k] * r * r);
    }
  };
  if (edges.size() == 2) {
    append(sinh_trapezoid_rule(params_.s_min, params_.s_max, params_.n_radial));
  } else {
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) append(tanh_sinh_rule(edges[e], edges[e + 1], params_.n_radial));
  }

  const auto theta = periodic_rule(params_.n_angular);
  angle_ = theta.x;
  phase_.resize(params_.n_angular);
  for (int j = 0; j < params_.n_angular; ++j) phase_(j) = std::polar(1.0, angle_[j]);
}

VectorXc QuadratureGrid::nodes() const {
  VectorXc out(size());
  for (Eigen::Index k = 0; k < size(); ++k) out(k) = node(k);
  return out;
}

VectorXr QuadratureGrid::weights() const {
  VectorXr out(size());
  for (Eigen::Index k = 0; k < size(); ++k) out(k) = weight(k);
  return out;
}

QuadratureGrid QuadratureGrid::with_truncation(double s_min, double s_max) const {
  auto p = params_;
  if (p.split_radii.empty()) {
    const double ratio = (std::asinh(s_max) - std::asinh(s_min)) / (std::asinh(p.s_max) - std::asinh(p.s_min));
    p.n_radial = static_cast<int>(std::lround((p.n_radial - 1) * ratio)) + 1;
  }
  p.s_min = s_min;
  p.s_max = s_max;
  return build_grid(p);
}

QuadratureGrid QuadratureGrid::refined() const {
  auto p = params_;
  p.n_radial *= 2;
  p.n_angular *= 2;
  return build_grid(p);
}

QuadratureGrid build_grid(int n_radial, int n_angular, std::vector<double> split_radii, double s_min, double s_max) {
  return build_grid(QuadratureParams{n_radial, n_angular, std::move(split_radii), s_min, s_max});
}

QuadratureGrid build_grid(const QuadratureParams& params) {
  if (params.n_radial < 32 || params.n_angular < 32)
    throw Error(ErrorKind::ResolutionTooLow, "grid needs at least 32 radial and 32 angular nodes, got " +
                                                 std::to_string(params.n_radial) + "x" +
                                                 std::to_string(params.n_angular));
  if (!(params.s_min < params.s_max)) throw Error(ErrorKind::InvalidArgument, "s_min must be below s_max");
  double previous = params.s_min;
  for (double r : params.split_radii) {
    if (!(r > 0.0)) throw Error(ErrorKind::InvalidArgument, "split radii must be positive");
    const double s = std::log(r);
    if (!(s > previous) || !(s < params.s_max))
      throw Error(ErrorKind::InvalidArgument, "split radii must be increasing and inside the truncation window");
    previous = s;
  }
  return QuadratureGrid(params);
}

}  // namespace bergman
