#include "bergman/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bergman/parallel.hpp"

namespace bergman {

namespace {

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  return out;
}

constexpr double kLogRadiusBound = 14.0;
constexpr double kMaxSegment = 0.5;
constexpr int kRadialOrder = 8;
constexpr int kAngularOrder = 4;

// Mass of a measure on every test set, built from the masses of
// (radial segment, sector) cells and from exactly located singular parts.
class SetAccumulator {
 public:
  explicit SetAccumulator(const TestSetFamily& family) : family_(family), masses_(family.size(), 0.0) {}

  void add_point(Complex z, double mass) {
    const double r = std::abs(z);
    double theta = std::arg(z);
    if (theta < 0) theta += kTwoPi;
    std::size_t k = 0;
    for (double radius : family_.disk_radii) masses_[k++] += r < radius ? mass : 0.0;
    const auto sectors = family_.sector_edges.size() - 1;
    for (std::size_t s = 0; s < sectors; ++s)
      masses_[k++] += theta >= family_.sector_edges[s] && theta < family_.sector_edges[s + 1] ? mass : 0.0;
    for (std::size_t a = 0; a + 1 < family_.annulus_edges.size(); ++a)
      masses_[k++] += r >= family_.annulus_edges[a] && r < family_.annulus_edges[a + 1] ? mass : 0.0;
    total_ += mass;
  }

  void add_circle(const CircleComponent& c) {
    std::size_t k = 0;
    for (double radius : family_.disk_radii) masses_[k++] += c.radius < radius ? c.mass : 0.0;
    const auto sectors = family_.sector_edges.size() - 1;
    for (std::size_t s = 0; s < sectors; ++s)
      masses_[k++] += c.mass * (family_.sector_edges[s + 1] - family_.sector_edges[s]) / kTwoPi;
    for (std::size_t a = 0; a + 1 < family_.annulus_edges.size(); ++a)
      masses_[k++] += c.radius >= family_.annulus_edges[a] && c.radius < family_.annulus_edges[a + 1] ? c.mass : 0.0;
    total_ += c.mass;
  }

  // cells(i, s): mass of radial segment [log_edges[i], log_edges[i+1]) in sector s.
  void add_cells(const std::vector<double>& log_edges, const MatrixXr& cells) {
    const VectorXr radial = cells.rowwise().sum();
    const VectorXr angular = cells.colwise().sum().transpose();
    auto below = [&](double radius) {
      const double s = std::log(radius);
      double m = 0.0;
      for (Eigen::Index i = 0; i < radial.size(); ++i)
        if (log_edges[i + 1] <= s + 1e-12) m += radial(i);
      return m;
    };
    std::size_t k = 0;
    for (double radius : family_.disk_radii) masses_[k++] += below(radius);
    for (Eigen::Index s = 0; s < angular.size(); ++s) masses_[k++] += angular(s);
    for (std::size_t a = 0; a + 1 < family_.annulus_edges.size(); ++a)
      masses_[k++] += below(family_.annulus_edges[a + 1]) - below(family_.annulus_edges[a]);
    total_ += radial.sum();
  }

  MeasureSummary finish(double x1_mass) const {
    MeasureSummary out;
    out.set_masses = masses_;
    out.x1_mass = x1_mass;
    out.total_mass = total_ + x1_mass;
    return out;
  }

 private:
  const TestSetFamily& family_;
  std::vector<double> masses_;
  double total_ = 0.0;
};

}  // namespace

const TestSetFamily& TestSetFamily::standard() {
  static const TestSetFamily family = [] {
    TestSetFamily f;
    f.disk_radii = geometric(1e-2, 1e2, 64);
    f.annulus_edges = geometric(1e-2, 1e2, 33);
    for (int k = 0; k <= 32; ++k) f.sector_edges.push_back(kTwoPi * k / 32);
    return f;
  }();
  return family;
}

Rule1D gauss_legendre_rule(double a, double b, int n) {
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix.
  VectorXr diag = VectorXr::Zero(n);
  VectorXr sub(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) sub(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<MatrixXr> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  Rule1D out;
  out.x.resize(n);
  out.w.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v = eig.eigenvectors()(0, k);
    out.x[k] = 0.5 * (a + b) + 0.5 * (b - a) * eig.eigenvalues()(k);
    out.w[k] = (b - a) * v * v;
  }
  return out;
}

MeasureSummary summarize_atoms(std::span<const std::pair<Complex, double>> atoms, double x1_mass) {
  SetAccumulator acc(TestSetFamily::standard());
  for (const auto& [z, m] : atoms) acc.add_point(z, m);
  return acc.finish(x1_mass);
}

MeasureSummary summarize_density(const std::function<double(Complex)>& density,
                                 std::span<const CircleComponent> circles, std::span<const AtomComponent> atoms,
                                 double x1_mass) {
  const auto& family = TestSetFamily::standard();

  std::vector<double> breaks{-kLogRadiusBound, 0.0, kLogRadiusBound};
  for (double r : family.disk_radii) breaks.push_back(std::log(r));
  for (double r : family.annulus_edges) breaks.push_back(std::log(r));
  for (const auto& c : circles) breaks.push_back(std::log(c.radius));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               breaks.end());
  std::vector<double> edges{breaks.front()};
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double gap = breaks[i] - breaks[i - 1];
    const int pieces = static_cast<int>(std::ceil(gap / kMaxSegment));
    for (int q = 1; q <= pieces; ++q) edges.push_back(breaks[i - 1] + gap * q / pieces);
  }

  const auto segments = static_cast<Eigen::Index>(edges.size() - 1);
  const auto sectors = static_cast<Eigen::Index>(family.sector_edges.size() - 1);
  std::vector<Rule1D> angular(sectors);
  for (Eigen::Index s = 0; s < sectors; ++s)
    angular[s] = gauss_legendre_rule(family.sector_edges[s], family.sector_edges[s + 1], kAngularOrder);

  MatrixXr cells = MatrixXr::Zero(segments, sectors);
  parallel_for(segments, [&](std::ptrdiff_t i) {
    const Rule1D radial = gauss_legendre_rule(edges[i], edges[i + 1], kRadialOrder);
    for (Eigen::Index s = 0; s < sectors; ++s) {
      CompensatedSum<double> acc;
      for (int a = 0; a < kRadialOrder; ++a) {
        const double r = std::exp(radial.x[a]);
        for (int b = 0; b < kAngularOrder; ++b)
          acc.add(density(std::polar(r, angular[s].x[b])) * r * r * radial.w[a] * angular[s].w[b]);
      }
      cells(i, s) = acc.value();
    }
  });

  SetAccumulator acc(family);
  acc.add_cells(edges, cells);
  for (const auto& c : circles) acc.add_circle(c);
  for (const auto& a : atoms) {
    if (a.at_x1)
      x1_mass += a.mass;
    else
      acc.add_point(a.location, a.mass);
  }
  return acc.finish(x1_mass);
}

MeasureSummary summarize(const CurvatureMeasure& curvature) {
  return summarize_density(curvature.density, curvature.circles, curvature.atoms);
}

MeasureSummary summarize(const ExpectedDivisor& divisor) { return summarize_atoms(divisor.atoms, divisor.x1_mass); }

MeasureSummary summarize_fs_measure(const BergmanSpace& space) {
  const double p = space.p();
  const double atom = (space.p() * space.curve().degree() - space.top_degree()) / p;
  return summarize_density([&space, p](Complex z) { return fs_density_exact(space, z) / p; }, {}, {}, atom);
}

double discrepancy(const MeasureSummary& a, const MeasureSummary& b) {
  if (a.set_masses.size() != b.set_masses.size())
    throw Error(ErrorKind::InvalidArgument, "summaries use different test families");
  if (std::abs(a.total_mass - b.total_mass) > 1e-6)
    throw Error(ErrorKind::MassMismatch, "total masses " + std::to_string(a.total_mass) + " and " +
                                             std::to_string(b.total_mass) + " differ");
  double out = 0.0;
  for (std::size_t k = 0; k < a.set_masses.size(); ++k)
    out = std::max(out, std::abs(a.set_masses[k] - b.set_masses[k]));
  return out;
}

VanishingOrderFit curvature_vanishing_order(const std::function<double(Complex)>& log_density, double t_inner,
                                            double t_outer) {
  if (!(t_inner > 0 && t_outer > t_inner)) throw Error(ErrorKind::InvalidArgument, "need 0 < t_inner < t_outer");
  constexpr int n_radii = 9;
  constexpr int n_angles = 16;
  std::vector<double> x;
  std::vector<double> y;
  for (double t : geometric(t_inner, t_outer, n_radii)) {
    double mean = 0.0;
    for (int j = 0; j < n_angles; ++j) {
      const Complex tz = std::polar(t, kTwoPi * (j + 0.5) / n_angles);
      mean += log_density(1.0 / tz) - 4.0 * std::log(t);
    }
    x.push_back(std::log(t));
    y.push_back(mean / n_angles);
  }
  VanishingOrderFit out;
  out.order = fit_line(x, y).slope;
  out.r = out.order + 2.0;
  out.t_inner = t_inner;
  out.t_outer = t_outer;
  return out;
}

double min_kernel(const BergmanSpace& space, double radius, int n_radial, int n_angular) {
  double lo = log_kernel_at(space, Complex{0.0});
  for (int i = 1; i <= n_radial; ++i)
    for (int j = 0; j < n_angular; ++j)
      lo = std::min(lo, log_kernel_at(space, std::polar(radius * i / n_radial, kTwoPi * j / n_angular)));
  return std::exp(lo);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorKind::InvalidArgument, "line fit needs matching points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (!(sxx > 1e-300)) throw Error(ErrorKind::IllConditioned, "line fit with a single abscissa");
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  return out;
}

KernelGrowth kernel_growth_exponent(const PlaneCurve& curve, const Weight& weight, std::span<const int> p_ladder,
                                    const QuadratureParams& params, double eval_radius) {
  if (weight.kind() != WeightKind::FubiniStudy && weight.kind() != WeightKind::SmoothRadial)
    throw Error(ErrorKind::InvalidArgument, "kernel growth needs a smooth weight (fs or smooth_radial)");
  if (p_ladder.size() < 4) throw Error(ErrorKind::InvalidArgument, "kernel growth needs at least four levels");
  for (std::size_t k = 1; k < p_ladder.size(); ++k)
    if (p_ladder[k] <= p_ladder[k - 1]) throw Error(ErrorKind::InvalidArgument, "p ladder must increase");

  const auto grid = std::make_shared<const QuadratureGrid>(grid_for_weight(weight, params));
  KernelGrowth out;
  out.p_ladder.assign(p_ladder.begin(), p_ladder.end());
  out.min_kernel.resize(p_ladder.size());
  parallel_for(static_cast<std::ptrdiff_t>(p_ladder.size()), [&](std::ptrdiff_t k) {
    const auto space = build_space(SpaceKind::WeaklyHolomorphic, curve, weight, p_ladder[k], grid);
    out.min_kernel[k] = min_kernel(space, eval_radius);
  });

  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = 0; k < p_ladder.size(); ++k) {
    x.push_back(std::log(static_cast<double>(p_ladder[k])));
    y.push_back(std::log(out.min_kernel[k]));
  }
  out.slope = fit_line(x, y).slope;

  if (weight.kind() == WeightKind::FubiniStudy) {
    out.vanishing = curvature_vanishing_order([&curve](Complex z) { return log_fs_pullback_density(curve, z); });
  } else {
    const auto curvature = curvature_measure(weight, curve, *grid);
    out.vanishing = curvature_vanishing_order([&curvature](Complex z) { return std::log(curvature.density(z)); });
  }
  out.bound = 2.0 / out.vanishing.r;
  return out;
}

double log_kernel_l1(const std::function<double(Complex)>& log_kernel, const PlaneCurve& curve,
                     const QuadratureGrid& grid, int p) {
  const auto result =
      integrate(grid, [&](Complex z) { return Complex(std::abs(log_kernel(z)) * fs_pullback_density(curve, z)); });
  return result.value.real() / p;
}

double potential_l1(const BergmanSpace& space, const RandomSection& section, const QuadratureGrid& grid) {
  const auto& weight = space.weight();
  const auto& curve = space.curve();
  const int p = section.p;
  const auto result = integrate(grid, [&](Complex z) {
    const double v = std::log(std::abs(horner(section.poly, z))) - p * weight(z);
    return Complex(std::abs(v) * fs_pullback_density(curve, z));
  });
  return result.value.real() / p;
}

bool decreases_by_factor(std::span<const double> series, double factor) {
  if (series.size() < 2) return false;
  return series.back() * factor <= series.front();
}

ConvergenceReport run_convergence(const PlaneCurve& curve, const Weight& weight, std::span<const SpaceKind> kinds,
                                std::span<const int> p_ladder, const QuadratureParams& params, int n_samples,
                                std::uint64_t seed, double eval_radius) {
  if (kinds.empty()) throw Error(ErrorKind::InvalidArgument, "no space kinds requested");
  if (p_ladder.size() < 2) throw Error(ErrorKind::InvalidArgument, "p ladder needs at least two levels");
  for (std::size_t k = 1; k < p_ladder.size(); ++k)
    if (p_ladder[k] <= p_ladder[k - 1]) throw Error(ErrorKind::InvalidArgument, "p ladder must increase");

  const auto grid = std::make_shared<const QuadratureGrid>(grid_for_weight(weight, params));
  const auto curvature = curvature_measure(weight, curve, *grid);
  const MeasureSummary target = summarize(curvature);
  const auto rungs = static_cast<std::ptrdiff_t>(p_ladder.size());

  ConvergenceReport out;
  out.p_ladder.assign(p_ladder.begin(), p_ladder.end());
  out.pass = true;
  for (SpaceKind kind : kinds) {
    KindSeries series;
    series.kind = kind;
    series.l1_log_kernel.resize(rungs);
    series.fs_discrepancy.resize(rungs);
    series.x1_atom.resize(rungs);
    series.dims.resize(rungs);
    series.condition_numbers.resize(rungs);
    parallel_for(rungs, [&](std::ptrdiff_t k) {
      const auto space = build_space(kind, curve, weight, p_ladder[k], grid);
      series.l1_log_kernel[k] = log_kernel_l1(space, *grid);
      series.fs_discrepancy[k] = discrepancy(summarize_fs_measure(space), target);
      series.x1_atom[k] = space.p() * curve.degree() - space.top_degree();
      series.dims[k] = space.dim();
      series.condition_numbers[k] = space.condition_number();
    });
    series.pass = decreases_by_factor(series.l1_log_kernel) && decreases_by_factor(series.fs_discrepancy);
    out.pass = out.pass && series.pass;
    out.kinds.push_back(std::move(series));
  }

  out.min_kernel.resize(rungs);
  if (n_samples > 0) {
    out.potential_l1.resize(rungs);
    out.discrepancy.resize(rungs);
  }
  for (std::ptrdiff_t k = 0; k < rungs; ++k) {
    const auto space = build_space(kinds.front(), curve, weight, p_ladder[k], grid);
    out.min_kernel[k] = min_kernel(space, eval_radius);
    if (n_samples <= 0) continue;
    const auto expected = expectation_divisor(space, n_samples, seed);
    out.discrepancy[k] = discrepancy(summarize(expected), target);
    std::vector<double> l1(n_samples);
    parallel_for(n_samples, [&](std::ptrdiff_t i) {
      l1[i] = potential_l1(space, sample_section(space, seed, static_cast<std::uint64_t>(i)), *grid);
    });
    double mean = 0.0;
    for (double v : l1) mean += v;
    out.potential_l1[k] = mean / n_samples;
  }

  std::vector<double> x;
  std::vector<double> y;
  for (std::ptrdiff_t k = 0; k < rungs; ++k) {
    x.push_back(std::log(static_cast<double>(p_ladder[k])));
    y.push_back(std::log(out.min_kernel[k]));
  }
  out.fitted_exponent = fit_line(x, y).slope;
  return out;
}

}  // namespace bergman
