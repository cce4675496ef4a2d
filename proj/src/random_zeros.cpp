#include "bergman/random_zeros.hpp"

#include <algorithm>
#include <cmath>

#include "bergman/parallel.hpp"
#include "bergman/polynomial.hpp"

namespace bergman {

std::mt19937_64 section_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

RandomSection sample_section(const BergmanSpace& space, std::uint64_t seed, std::uint64_t index) {
  if (!space.has_basis()) throw Error(ErrorKind::InvalidArgument, "space must be orthonormalized before sampling");
  auto engine = section_engine(seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);

  RandomSection out;
  out.p = space.p();
  out.d = space.curve().degree();
  out.seed = seed;
  out.index = index;
  out.coeffs.resize(space.dim());
  for (Eigen::Index j = 0; j < out.coeffs.size(); ++j) {
    const double re = normal(engine);
    const double im = normal(engine);
    out.coeffs(j) = Complex(re, im);
  }
  out.coeffs.normalize();
  out.poly = space.section_coefficients(out.coeffs);
  return out;
}

DivisorMeasure divisor_of(const RandomSection& section, const RootOptions& options) {
  DivisorMeasure out;
  out.degree = static_cast<int>(effective_degree(section.poly, options.degree_tolerance));
  if (out.degree < 0) throw Error(ErrorKind::InvalidArgument, "zero section has no divisor");
  if (out.degree > 0) {
    for (const auto& root : polynomial_roots<double>(section.poly, options))
      out.finite_atoms.push_back({root.value, root.multiplicity});
  }
  int finite = 0;
  for (const auto& a : out.finite_atoms) finite += a.multiplicity;
  if (finite != out.degree)
    throw Error(ErrorKind::NonConvergence, "root multiplicities sum to " + std::to_string(finite) +
                                               " for a degree " + std::to_string(out.degree) + " section");
  out.atom_at_x1 = section.p * section.d - out.degree;
  out.total_mass = finite + out.atom_at_x1;
  return out;
}

ExpectedDivisor expectation_divisor(const BergmanSpace& space, int n_samples, std::uint64_t seed,
                                    const RootOptions& options) {
  if (n_samples < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample");
  ExpectedDivisor out;
  out.p = space.p();
  out.d = space.curve().degree();
  out.n_samples = n_samples;
  out.seed = seed;
  out.divisors.resize(n_samples);
  parallel_for(n_samples, [&](std::ptrdiff_t i) {
    out.divisors[i] = divisor_of(sample_section(space, seed, static_cast<std::uint64_t>(i)), options);
  });

  const double unit = 1.0 / (static_cast<double>(out.p) * n_samples);
  long x1_total = 0;
  for (const auto& div : out.divisors) {
    for (const auto& a : div.finite_atoms) out.atoms.emplace_back(a.location, a.multiplicity * unit);
    x1_total += div.atom_at_x1;
  }
  out.x1_mass = static_cast<double>(x1_total) * unit;
  double finite = 0.0;
  for (const auto& a : out.atoms) finite += a.second;
  out.total_mass = finite + out.x1_mass;
  return out;
}

std::vector<double> ExpectedDivisor::radial_quantiles(int count) const {
  std::vector<std::pair<double, double>> radii;
  radii.reserve(atoms.size());
  double total = 0.0;
  for (const auto& [z, m] : atoms) {
    radii.emplace_back(std::abs(z), m);
    total += m;
  }
  std::sort(radii.begin(), radii.end());
  std::vector<double> out;
  out.reserve(count);
  double running = 0.0;
  std::size_t k = 0;
  for (int i = 0; i < count; ++i) {
    const double level = total * (i + 1) / (count + 1);
    while (k + 1 < radii.size() && running + radii[k].second < level) running += radii[k++].second;
    out.push_back(radii.empty() ? 0.0 : radii[k].first);
  }
  return out;
}

double ExpectedDivisor::annulus_fraction(double r_in, double r_out) const {
  double inside = 0.0;
  double total = 0.0;
  for (const auto& [z, m] : atoms) {
    total += m;
    const double r = std::abs(z);
    if (r > r_in && r < r_out) inside += m;
  }
  return total > 0 ? inside / total : 0.0;
}

ExpectedDivisor::AngularHistogram ExpectedDivisor::angular_histogram(int bins) const {
  AngularHistogram out;
  out.mean.assign(bins, 0.0);
  out.standard_error.assign(bins, 0.0);
  std::vector<double> sum_sq(bins, 0.0);
  int used = 0;
  for (const auto& div : divisors) {
    std::vector<double> frac(bins, 0.0);
    int total = 0;
    for (const auto& a : div.finite_atoms) {
      double theta = std::arg(a.location);
      if (theta < 0) theta += kTwoPi;
      const int b = std::min(bins - 1, static_cast<int>(theta / kTwoPi * bins));
      frac[b] += a.multiplicity;
      total += a.multiplicity;
    }
    if (total == 0) continue;
    ++used;
    for (int b = 0; b < bins; ++b) {
      frac[b] /= total;
      out.mean[b] += frac[b];
      sum_sq[b] += frac[b] * frac[b];
    }
  }
  if (used == 0) return out;
  for (int b = 0; b < bins; ++b) {
    out.mean[b] /= used;
    const double var = used > 1 ? (sum_sq[b] - used * out.mean[b] * out.mean[b]) / (used - 1) : 0.0;
    out.standard_error[b] = std::sqrt(std::max(var, 0.0) / used);
  }
  return out;
}

double RadialTestFunction::value(double r) const {
  const double a = 1.0 / (sigma * sigma);
  const double u = r * r;
  return std::exp(-a * u) * (1.0 + beta * a * u);
}

double RadialTestFunction::laplacian(double r) const {
  // chi = g(u), u = r^2: Delta chi = 4 (g'(u) + u g''(u))
  const double a = 1.0 / (sigma * sigma);
  const double u = r * r;
  const double e = std::exp(-a * u);
  const double g1 = a * e * (beta - 1.0 - beta * a * u);
  const double g2 = a * a * e * (1.0 - 2.0 * beta + beta * a * u);
  return 4.0 * (g1 + u * g2);
}

double RadialTestFunction::support_radius() const { return 7.5 * sigma; }

std::vector<RadialTestFunction> random_test_functions(int n, std::uint64_t seed) {
  auto engine = section_engine(seed, ~std::uint64_t{0});
  std::uniform_real_distribution<double> sigma(0.5, 3.0);
  std::uniform_real_distribution<double> beta(0.0, 1.0);
  std::vector<RadialTestFunction> out(n);
  for (auto& chi : out) {
    chi.sigma = sigma(engine);
    chi.beta = beta(engine);
  }
  return out;
}

std::vector<double> lelong_poincare_residuals(const BergmanSpace& space, const CurvatureMeasure& curvature,
                                              const RandomSection& section, const DivisorMeasure& divisor,
                                              std::span<const RadialTestFunction> tests, int n_radial,
                                              int n_angular) {
  double radius = 0.0;
  for (const auto& t : tests) radius = std::max(radius, t.support_radius());
  const double dr = radius / n_radial;
  const double dtheta = kTwoPi / n_angular;
  const int p = section.p;
  const auto& weight = space.weight();

  std::vector<Complex> phase(n_angular);
  for (int j = 0; j < n_angular; ++j) phase[j] = std::polar(1.0, (j + 0.5) * dtheta);

  // Per ring: angular sums of log|s|_{h_p} and of the curvature density.
  std::vector<double> ring_potential(n_radial);
  std::vector<double> ring_density(n_radial);
  parallel_for(n_radial, [&](std::ptrdiff_t i) {
    const double r = (i + 0.5) * dr;
    CompensatedSum<double> pot;
    CompensatedSum<double> dens;
    for (int j = 0; j < n_angular; ++j) {
      const Complex z = r * phase[j];
      pot.add(std::log(std::abs(horner(section.poly, z))) - p * weight(z));
      dens.add(curvature.density(z));
    }
    ring_potential[i] = pot.value() * dtheta * r * dr;
    ring_density[i] = dens.value() * dtheta * r * dr;
  });

  std::vector<double> out;
  out.reserve(tests.size());
  for (const auto& chi : tests) {
    double zeros = 0.0;
    for (const auto& a : divisor.finite_atoms) zeros += a.multiplicity * chi.value(std::abs(a.location));

    CompensatedSum<double> curv;
    CompensatedSum<double> potential;
    for (int i = 0; i < n_radial; ++i) {
      const double r = (i + 0.5) * dr;
      curv.add(chi.value(r) * ring_density[i]);
      potential.add(chi.laplacian(r) / kTwoPi * ring_potential[i]);
    }
    double singular = 0.0;
    for (const auto& c : curvature.circles) singular += c.mass * chi.value(c.radius);
    for (const auto& a : curvature.atoms)
      if (!a.at_x1) singular += a.mass * chi.value(std::abs(a.location));

    out.push_back(zeros - p * (curv.value() + singular) - potential.value());
  }
  return out;
}

}  // namespace bergman
