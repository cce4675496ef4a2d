#include "bergman/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "bergman/diagnostics.hpp"
#include "bergman/svg.hpp"

namespace bergman {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kAnnulusInner = 0.8;
constexpr double kAnnulusOuter = 1.25;
constexpr double kHeatmapExtent = 2.5;
constexpr int kHeatmapCells = 64;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json vec(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

class Session {
 public:
  Session(const RunConfig& cfg, const RunnerOptions& opt)
      : cfg_(cfg),
        opt_(opt),
        hash_(config_hash(cfg)),
        dir_(run_directory(cfg, opt)),
        curve_(make_curve(cfg)),
        weight_(make_weight(cfg, curve_)),
        grid_(std::make_shared<const QuadratureGrid>(grid_for_weight(weight_, cfg.quadrature))) {
    std::filesystem::create_directories(dir_);
  }

  const RunConfig& cfg() const { return cfg_; }
  const std::string& hash() const { return hash_; }
  const PlaneCurve& curve() const { return curve_; }
  const Weight& weight() const { return weight_; }
  std::shared_ptr<const QuadratureGrid> grid() const { return grid_; }
  RunArtifacts& artifacts() { return artifacts_; }

  void log(const std::string& msg) const {
    if (opt_.verbosity > 0) std::clog << "[bergman] " << msg << "\n";
  }

  std::ofstream open_csv(const std::string& name, const std::string& header) {
    std::ofstream out = open(name);
    out << "# config_hash: " << hash_ << "\n" << header << "\n";
    return out;
  }

  void write_json(const std::string& name, Json body) {
    Json j;
    j["config_hash"] = hash_;
    for (auto& [k, v] : body.items()) j[k] = v;
    open(name) << j.dump(2) << "\n";
  }

  void write_text(const std::string& name, const std::string& text) { open(name) << text; }

  std::filesystem::path path(const std::string& name) const { return dir_ / name; }
  const std::filesystem::path& dir() const { return dir_; }

  BergmanSpace space(SpaceKind kind, int p) const { return build_space(kind, curve_, weight_, p, grid_); }

 private:
  std::ofstream open(const std::string& name) {
    artifacts_.files.push_back(name);
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + (dir_ / name).string());
    return out;
  }

  const RunConfig& cfg_;
  const RunnerOptions& opt_;
  std::string hash_;
  std::filesystem::path dir_;
  PlaneCurve curve_;
  Weight weight_;
  std::shared_ptr<const QuadratureGrid> grid_;
  RunArtifacts artifacts_;
};

Json dims_section(Session& s, std::ostream& out) {
  const int d = s.curve().degree();
  auto csv = s.open_csv("dims.csv", "kind,p,measured,closed_form");
  Json rows = Json::array();
  out << "kind         p  measured  closed_form\n";
  for (SpaceKind kind : {SpaceKind::WeaklyHolomorphic, SpaceKind::Restriction, SpaceKind::RegularPart}) {
    for (int p : s.cfg().p_ladder) {
      s.log("dims " + to_string(kind) + " p=" + std::to_string(p));
      int measured = 0;
      int closed = 0;
      switch (kind) {
        case SpaceKind::WeaklyHolomorphic:
          measured = static_cast<int>(assemble_gram(kind, s.curve(), s.weight(), p, s.grid()).monomial_degrees().size());
          closed = weakly_holomorphic_dimension(d, p);
          break;
        case SpaceKind::Restriction:
          measured = restricted_space_rank(s.curve(), p);
          closed = restriction_dimension_closed_form(d, p);
          break;
        case SpaceKind::RegularPart:
          measured = static_cast<int>(assemble_gram(kind, s.curve(), s.weight(), p, s.grid()).monomial_degrees().size());
          closed = regular_degree_cutoff(d, p) + 1;
          break;
      }
      csv << to_string(kind) << "," << p << "," << measured << "," << closed << "\n";
      char line[96];
      std::snprintf(line, sizeof line, "%-11s %3d  %8d  %11d\n", to_string(kind).c_str(), p, measured, closed);
      out << line;
      rows.push_back({{"kind", to_string(kind)}, {"p", p}, {"measured", measured}, {"closed_form", closed}});
    }
  }
  return rows;
}

Json kernel_section(Session& s, std::ostream& out) {
  std::vector<Complex> points{Complex{0.0}};
  constexpr int n_radii = 15;
  constexpr int n_angles = 16;
  for (int i = 0; i < n_radii; ++i) {
    const double r = 0.05 * std::pow(400.0, static_cast<double>(i) / (n_radii - 1));
    for (int j = 0; j < n_angles; ++j) points.push_back(std::polar(r, kTwoPi * j / n_angles));
  }

  auto csv = s.open_csv("kernel.csv", "kind,p,re,im,P,logP");
  Json rows = Json::array();
  for (SpaceKind kind : s.cfg().kinds) {
    for (int p : s.cfg().p_ladder) {
      s.log("kernel " + to_string(kind) + " p=" + std::to_string(p));
      const auto space = s.space(kind, p);
      for (const auto& z : points) {
        const double lp = log_kernel_at(space, z);
        csv << to_string(kind) << "," << p << "," << num(z.real()) << "," << num(z.imag()) << "," << num(std::exp(lp))
            << "," << num(lp) << "\n";
      }
      const auto& curve = s.curve();
      const double trace =
          integrate(*s.grid(), [&](Complex z) { return Complex(kernel_at(space, z) * fs_pullback_density(curve, z)); })
              .value.real();
      Json row{{"kind", to_string(kind)},
               {"p", p},
               {"dim", space.dim()},
               {"top_degree", space.top_degree()},
               {"excluded_degrees", space.excluded_degrees()},
               {"condition_number", space.condition_number()},
               {"orthonormality_residual", space.orthonormality_residual()},
               {"trace", trace},
               {"l1_log_kernel", log_kernel_l1(space, *s.grid())},
               {"min_kernel", min_kernel(space, s.cfg().diagnostics.eval_radius)}};
      out << to_string(kind) << " p=" << p << " dim=" << space.dim() << " cond=" << num(space.condition_number())
          << " residual=" << num(space.orthonormality_residual()) << "\n";
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_curvature_grid(Session& s) {
  const auto curvature = curvature_measure(s.weight(), s.curve(), *s.grid());
  auto csv = s.open_csv("curvature.csv", "re,im,density");
  const double cell = 2.0 * kHeatmapExtent / kHeatmapCells;
  for (int i = 0; i < kHeatmapCells; ++i)
    for (int j = 0; j < kHeatmapCells; ++j) {
      const Complex z(-kHeatmapExtent + (j + 0.5) * cell, -kHeatmapExtent + (i + 0.5) * cell);
      csv << num(z.real()) << "," << num(z.imag()) << "," << num(curvature.density(z)) << "\n";
    }
}

Json zeros_section(Session& s, std::ostream& out) {
  const auto curvature = curvature_measure(s.weight(), s.curve(), *s.grid());
  const MeasureSummary target = summarize(curvature);
  auto zcsv = s.open_csv("zeros.csv", "kind,p,sample_index,re,im,multiplicity");
  auto acsv = s.open_csv("atoms.csv", "kind,p,sample_index,atom_at_x1");
  Json rows = Json::array();
  for (SpaceKind kind : s.cfg().kinds) {
    for (int p : s.cfg().p_ladder) {
      s.log("zeros " + to_string(kind) + " p=" + std::to_string(p));
      const auto space = s.space(kind, p);
      const auto expected = expectation_divisor(space, s.cfg().n_samples, s.cfg().seed);
      for (std::size_t i = 0; i < expected.divisors.size(); ++i) {
        const auto& div = expected.divisors[i];
        for (const auto& a : div.finite_atoms)
          zcsv << to_string(kind) << "," << p << "," << i << "," << num(a.location.real()) << ","
               << num(a.location.imag()) << "," << a.multiplicity << "\n";
        acsv << to_string(kind) << "," << p << "," << i << "," << div.atom_at_x1 << "\n";
      }
      int min_atom = expected.divisors.front().atom_at_x1;
      for (const auto& div : expected.divisors) min_atom = std::min(min_atom, div.atom_at_x1);
      std::vector<double> levels;
      for (int i = 0; i < 64; ++i) levels.push_back((i + 1) / 65.0);
      const auto hist = expected.angular_histogram(32);
      const double fraction = expected.annulus_fraction(kAnnulusInner, kAnnulusOuter);
      const double disc = discrepancy(summarize(expected), target);
      rows.push_back({{"kind", to_string(kind)},
                      {"p", p},
                      {"n_samples", expected.n_samples},
                      {"total_mass", expected.total_mass},
                      {"x1_mass", expected.x1_mass},
                      {"min_atom_at_x1", min_atom},
                      {"annulus", {{"r_in", kAnnulusInner}, {"r_out", kAnnulusOuter}, {"fraction", fraction}}},
                      {"discrepancy", disc},
                      {"radial_cdf", {{"levels", vec(levels)}, {"radii", vec(expected.radial_quantiles(64))}}},
                      {"angular_histogram", {{"mean", vec(hist.mean)}, {"standard_error", vec(hist.standard_error)}}}});
      out << to_string(kind) << " p=" << p << " annulus_fraction=" << num(fraction) << " discrepancy=" << num(disc)
          << "\n";
    }
  }
  return rows;
}

struct ConvergeResult {
  Json json;
  bool pass = false;
};

ConvergeResult converge_section(Session& s, std::ostream& out) {
  const auto& cfg = s.cfg();
  s.log("convergence ladder");
  const auto report = run_convergence(s.curve(), s.weight(), cfg.kinds, cfg.p_ladder, cfg.quadrature, cfg.n_samples,
                                    cfg.seed, cfg.diagnostics.eval_radius);

  auto csv = s.open_csv("report.csv", "series,p,value");
  auto emit = [&](const std::string& series, const std::vector<int>& ps, const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) csv << series << "," << ps[k] << "," << num(values[k]) << "\n";
  };

  Json kinds = Json::object();
  for (const auto& series : report.kinds) {
    const auto name = to_string(series.kind);
    emit("l1_log_kernel:" + name, report.p_ladder, series.l1_log_kernel);
    emit("fs_discrepancy:" + name, report.p_ladder, series.fs_discrepancy);
    emit("x1_atom:" + name, report.p_ladder, series.x1_atom);
    kinds[name] = {{"l1_log_kernel", vec(series.l1_log_kernel)},
                   {"fs_discrepancy", vec(series.fs_discrepancy)},
                   {"x1_atom", vec(series.x1_atom)},
                   {"dims", series.dims},
                   {"condition_numbers", vec(series.condition_numbers)},
                   {"pass", series.pass}};
    out << name << ": l1_log_kernel " << num(series.l1_log_kernel.front()) << " -> "
        << num(series.l1_log_kernel.back()) << ", fs_discrepancy " << num(series.fs_discrepancy.front()) << " -> "
        << num(series.fs_discrepancy.back()) << (series.pass ? "  PASS" : "  FAIL") << "\n";
  }
  emit("potential_l1", report.p_ladder, report.potential_l1);
  emit("discrepancy", report.p_ladder, report.discrepancy);
  emit("min_kernel", report.p_ladder, report.min_kernel);

  Json j;
  j["p_ladder"] = report.p_ladder;
  j["kinds"] = kinds;
  j["random_sections"] = {{"kind", to_string(cfg.kinds.front())},
                          {"n_samples", cfg.n_samples},
                          {"seed", cfg.seed},
                          {"potential_l1", vec(report.potential_l1)},
                          {"discrepancy", vec(report.discrepancy)}};
  j["min_kernel"] = {{"eval_radius", cfg.diagnostics.eval_radius},
                     {"values", vec(report.min_kernel)},
                     {"fitted_exponent", report.fitted_exponent}};

  if (s.weight().kind() == WeightKind::FubiniStudy || s.weight().kind() == WeightKind::SmoothRadial) {
    s.log("kernel growth exponent");
    const auto growth = kernel_growth_exponent(s.curve(), s.weight(), cfg.diagnostics.exponent_ladder, cfg.quadrature,
                                               cfg.diagnostics.eval_radius);
    emit("growth_min_kernel", growth.p_ladder, growth.min_kernel);
    j["kernel_growth"] = {{"p_ladder", growth.p_ladder},
                          {"min_kernel", vec(growth.min_kernel)},
                          {"slope", growth.slope},
                          {"vanishing_order", growth.vanishing.order},
                          {"r", growth.vanishing.r},
                          {"bound", growth.bound},
                          {"stencil",
                           {{"chart", "t = 1/zeta"},
                            {"t_inner", growth.vanishing.t_inner},
                            {"t_outer", growth.vanishing.t_outer},
                            {"radii", 9},
                            {"angles", 16}}}};
    out << "kernel growth slope " << num(growth.slope) << " (2/r = " << num(growth.bound) << ")\n";
  } else {
    j["kernel_growth"] = {{"skipped", "weight is not smooth"}};
  }

  s.log("Lelong-Poincare residuals");
  const auto curvature = curvature_measure(s.weight(), s.curve(), *s.grid());
  const auto tests = random_test_functions(10, cfg.seed);
  std::vector<double> lp_max;
  for (int p : cfg.p_ladder) {
    const auto space = s.space(cfg.kinds.front(), p);
    double worst = 0.0;
    for (int i = 0; i < cfg.diagnostics.lp_samples; ++i) {
      const auto section = sample_section(space, cfg.seed, static_cast<std::uint64_t>(i));
      for (double r : lelong_poincare_residuals(space, curvature, section, divisor_of(section), tests))
        worst = std::max(worst, std::abs(r));
    }
    lp_max.push_back(worst);
  }
  emit("lp_max_residual", cfg.p_ladder, lp_max);
  Json test_functions = Json::array();
  for (const auto& chi : tests) test_functions.push_back({{"sigma", chi.sigma}, {"beta", chi.beta}});
  j["lelong_poincare"] = {{"kind", to_string(cfg.kinds.front())},
                          {"sections_per_level", cfg.diagnostics.lp_samples},
                          {"test_functions", test_functions},
                          {"max_abs_residual", vec(lp_max)}};
  j["pass"] = report.pass;
  out << "convergence trend " << (report.pass ? "PASS" : "FAIL") << "\n";
  return {j, report.pass};
}

void write_zero_plot(Session& s) {
  const auto curvature = read_csv(s.path("curvature.csv"));
  const auto zeros = read_csv(s.path("zeros.csv"));
  CsvTable subset;
  subset.header = zeros.header;
  const auto ck = zeros.column("kind");
  const auto cp = zeros.column("p");
  const auto kind = to_string(s.cfg().kinds.front());
  const auto p = std::to_string(s.cfg().p_ladder.back());
  for (const auto& row : zeros.rows)
    if (row[ck] == kind && row[cp] == p) subset.rows.push_back(row);
  s.write_text("zeros.svg", zero_scatter_svg(curvature, subset));
}

void write_report_plots(Session& s) {
  const auto report = read_csv(s.path("report.csv"));
  s.write_text("kernel_min.svg", kernel_fit_svg(report));
  s.write_text("l1_decay.svg", l1_decay_svg(report));
}

Json manifest(const Session& s) {
  const auto& q = s.cfg().quadrature;
  return {{"config_hash", s.hash()},
          {"config", Json::parse(canonical_json(s.cfg()))},
          {"grid",
           {{"n_radial", q.n_radial},
            {"n_angular", q.n_angular},
            {"split_radii", s.grid()->split_radii()},
            {"s_min", q.s_min},
            {"s_max", q.s_max},
            {"radial_nodes", s.grid()->radial_size()}}},
          {"seed", s.cfg().seed},
          {"compiler", __VERSION__},
          {"cxx_standard", __cplusplus}};
}

RunArtifacts finish(Session& s, std::ostream& out, bool pass) {
  auto artifacts = s.artifacts();
  artifacts.run_dir = s.dir();
  artifacts.pass = pass;
  out << "run directory: " << artifacts.run_dir.string() << "\n";
  return artifacts;
}

}  // namespace

std::filesystem::path run_directory(const RunConfig& config, const RunnerOptions& options) {
  const std::filesystem::path base = options.output_dir ? *options.output_dir : std::filesystem::path(config.output_dir);
  return base / ("run-" + config_hash(config));
}

RunArtifacts cmd_dims(const RunConfig& config, const RunnerOptions& options, std::ostream& out) {
  Session s(config, options);
  s.write_json("dims.json", {{"dims", dims_section(s, out)}});
  return finish(s, out, true);
}

RunArtifacts cmd_kernel(const RunConfig& config, const RunnerOptions& options, std::ostream& out) {
  Session s(config, options);
  s.write_json("kernel.json", {{"spaces", kernel_section(s, out)}});
  return finish(s, out, true);
}

RunArtifacts cmd_zeros(const RunConfig& config, const RunnerOptions& options, std::ostream& out) {
  Session s(config, options);
  s.write_json("zeros.json", {{"summaries", zeros_section(s, out)}});
  if (config.emit_plots) {
    write_curvature_grid(s);
    write_zero_plot(s);
  }
  return finish(s, out, true);
}

RunArtifacts cmd_converge(const RunConfig& config, const RunnerOptions& options, std::ostream& out) {
  Session s(config, options);
  auto result = converge_section(s, out);
  s.write_json("report.json", std::move(result.json));
  if (config.emit_plots) write_report_plots(s);
  return finish(s, out, result.pass);
}

RunArtifacts cmd_report(const RunConfig& config, const RunnerOptions& options, std::ostream& out) {
  Session s(config, options);
  Json body;
  body["manifest"] = manifest(s);
  body["dims"] = dims_section(s, out);
  body["kernel"] = kernel_section(s, out);
  body["zeros"] = zeros_section(s, out);
  auto result = converge_section(s, out);
  body["convergence"] = std::move(result.json);
  body["pass"] = result.pass;
  if (config.emit_plots) {
    write_curvature_grid(s);
    write_zero_plot(s);
    write_report_plots(s);
  }
  auto files = s.artifacts().files;
  files.push_back("report.json");
  body["manifest"]["files"] = files;
  s.write_json("report.json", std::move(body));
  return finish(s, out, result.pass);
}

}  // namespace bergman
