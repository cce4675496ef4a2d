#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bergman/bergman_space.hpp"

namespace bergman {

struct CurveSpec {
  //! Homogeneous coefficients a_0..a_d of Q.
  std::vector<Complex> coeffs;
  int degree = 0;
};

struct DiagnosticsSpec {
  std::vector<int> exponent_ladder{4, 8, 16, 32};
  double eval_radius = 2.0;
  int lp_samples = 10;
};

/**
 * One experiment. Parsed from TOML:
 *
 *   seed = 1                      # required
 *   n_samples = 200
 *   output_dir = "runs"
 *   emit_plots = true
 *   p_ladder = [2, 4, 8, 16]
 *   kinds = ["w", "regular"]
 *   [curve]     degree = 3, coeffs = [[1, 0], [0, 0], [0, 0], [0, 0]]
 *   [weight]    kind = "fs" | "logplus" | "smooth_radial_fs"
 *   [quadrature] n_radial, n_angular, split_radii, s_min, s_max
 *   [diagnostics] exponent_ladder, eval_radius, lp_samples
 *
 * Coefficients are [re, im] pairs or plain reals. Unknown keys are rejected.
 */
struct RunConfig {
  CurveSpec curve;
  std::string weight = "fs";
  std::vector<SpaceKind> kinds{SpaceKind::WeaklyHolomorphic, SpaceKind::RegularPart};
  std::vector<int> p_ladder{2, 4, 8, 16};
  QuadratureParams quadrature;
  int n_samples = 200;
  std::uint64_t seed = 0;
  std::string output_dir = "runs";
  bool emit_plots = true;
  DiagnosticsSpec diagnostics;
};

//! Throws Error(Config) with the offending key.
RunConfig parse_config(std::string_view toml_text, std::string_view source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

//! Canonical JSON of every field that affects results (output_dir excluded).
std::string canonical_json(const RunConfig& config);
//! 16 hex digits of the 64-bit FNV-1a hash of canonical_json.
std::string config_hash(const RunConfig& config);

PlaneCurve make_curve(const RunConfig& config);
Weight make_weight(const RunConfig& config, const PlaneCurve& curve);

}  // namespace bergman
