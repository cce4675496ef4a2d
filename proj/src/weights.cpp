#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bergman {

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::FubiniStudy: return "fs";
    case WeightKind::LogPlus: return "logplus";
    case WeightKind::SmoothRadial: return "smooth_radial";
    case WeightKind::Custom: return "custom";
  }
  return "unknown";
}

double SingularParts::potential(Complex zeta) const {
  double out = 0.0;
  for (const auto& c : circles) out += c.mass * std::log(std::max(std::abs(zeta), c.radius));
  for (const auto& a : atoms)
    if (!a.at_x1) out += a.mass * std::log(std::abs(zeta - a.location));
  return out;
}

double SingularParts::mass() const {
  double out = 0.0;
  for (const auto& c : circles) out += c.mass;
  for (const auto& a : atoms) out += a.mass;
  return out;
}

double fs_weight(const PlaneCurve& curve, Complex zeta) {
  const Complex p = curve.p(zeta);
  const double m = std::max({1.0, std::abs(zeta), std::abs(p)});
  return 0.5 * std::log(1.0 / (m * m) + std::norm(zeta / m) + std::norm(p / m)) + std::log(m);
}

double logplus_weight(int d, Complex zeta) { return d * std::max(std::log(std::abs(zeta)), 0.0); }

Weight Weight::fubini_study(const PlaneCurve& curve) {
  Weight w;
  w.kind_ = WeightKind::FubiniStudy;
  w.d_ = curve.degree();
  w.radial_ = curve.is_radial();
  w.curve_ = curve;
  w.phi_ = [curve](Complex z) { return fs_weight(curve, z); };
  w.exact_density_ = [curve](Complex z) { return fs_pullback_density(curve, z); };
  return w;
}

Weight Weight::log_plus(int d) {
  if (d < 2) throw Error(ErrorKind::InvalidArgument, "log+ weight needs d >= 2");
  Weight w;
  w.kind_ = WeightKind::LogPlus;
  w.d_ = d;
  w.radial_ = true;
  w.phi_ = [d](Complex z) { return logplus_weight(d, z); };
  w.exact_density_ = [](Complex) { return 0.0; };
  w.singular_.circles.push_back({1.0, static_cast<double>(d)});
  return w;
}

Weight Weight::smooth_radial(int d, std::function<double(double)> profile, std::function<double(double)> density) {
  Weight w;
  w.kind_ = WeightKind::SmoothRadial;
  w.d_ = d;
  w.radial_ = true;
  w.phi_ = [profile = std::move(profile)](Complex z) { return profile(std::abs(z)); };
  if (density) w.exact_density_ = [density = std::move(density)](Complex z) { return density(std::abs(z)); };
  return w;
}

Weight Weight::smooth_radial_fs(int d) {
  return smooth_radial(
      d, [d](double r) { return 0.5 * d * std::log1p(r * r); },
      [d](double r) {
        const double a = 1.0 + r * r;
        return d / (kPi * a * a);
      });
}

Weight Weight::custom(int d, std::function<double(Complex)> phi, SingularParts declared) {
  Weight w;
  w.kind_ = WeightKind::Custom;
  w.d_ = d;
  w.phi_ = std::move(phi);
  w.singular_ = std::move(declared);
  return w;
}

std::vector<double> Weight::kink_radii() const {
  std::vector<double> out;
  for (const auto& c : singular_.circles) out.push_back(c.radius);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double discrete_laplacian_density(const std::function<double(Complex)>& f, Complex zeta, double h) {
  const double centre = f(zeta);
  const double sum = f(zeta + h) + f(zeta - h) + f(zeta + Complex(0, h)) + f(zeta - Complex(0, h));
  return (sum - 4.0 * centre) / (h * h) / kTwoPi;
}

double growth_check(const Weight& w, int d, std::span<const double> radii) {
  if (radii.size() < 2) throw Error(ErrorKind::InvalidArgument, "growth check needs at least two radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw Error(ErrorKind::InvalidArgument, "growth check radii must increase");
  if (radii.back() < 1e3) throw Error(ErrorKind::InvalidArgument, "largest growth-check radius must be >= 1e3");

  constexpr int n_theta = 64;
  std::vector<double> sup(radii.size(), -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    for (int j = 0; j < n_theta; ++j) {
      const Complex z = std::polar(radii[i], kTwoPi * (j + 0.5) / n_theta);
      const double v = w(z);
      if (std::isfinite(v)) sup[i] = std::max(sup[i], v - logplus_weight(d, z));
    }
  }
  const auto n = radii.size();
  if (sup[n - 1] - sup[n - 2] > 1e-2)
    throw Error(ErrorKind::GrowthViolation, "phi - d log+|zeta| grows between radius " + std::to_string(radii[n - 2]) +
                                                " and " + std::to_string(radii[n - 1]));
  return *std::max_element(sup.begin(), sup.end());
}

CurvatureMeasure curvature_measure(const Weight& w, const PlaneCurve& curve, const QuadratureGrid& grid) {
  if (grid.n_radial() < 64 || grid.n_angular() < 64)
    throw Error(ErrorKind::ResolutionTooLow, "curvature measure needs a grid of at least 64x64");

  CurvatureMeasure out;
  switch (w.kind()) {
    case WeightKind::FubiniStudy:
      out.density = [curve](Complex z) { return fs_pullback_density(curve, z); };
      break;
    case WeightKind::LogPlus:
      out.density = [](Complex) { return 0.0; };
      break;
    case WeightKind::SmoothRadial:
    case WeightKind::Custom:
      if (w.exact_density()) {
        out.density = w.exact_density();
      } else {
        const SingularParts singular = w.singular_parts();
        std::function<double(Complex)> regular = [w, singular](Complex z) { return w(z) - singular.potential(z); };
        out.density = [regular](Complex z) { return discrete_laplacian_density(regular, z, laplacian_step(z)); };
      }
      break;
  }
  out.circles = w.singular_parts().circles;
  out.atoms = w.singular_parts().atoms;

  out.density_mass = integrate(grid, [&](Complex z) { return Complex(out.density(z)); }).value.real();
  out.total_mass = out.density_mass + w.singular_parts().mass();
  if (std::abs(out.total_mass - w.scale()) > 1e-3)
    throw Error(ErrorKind::MassMismatch, "curvature mass " + std::to_string(out.total_mass) + " differs from d = " +
                                             std::to_string(w.scale()));
  return out;
}

}  // namespace bergman
