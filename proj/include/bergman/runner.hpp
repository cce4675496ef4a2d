#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bergman/config.hpp"

namespace bergman {

struct RunnerOptions {
  //! Replaces config.output_dir; does not change the config hash.
  std::optional<std::filesystem::path> output_dir;
  int verbosity = 0;
};

struct RunArtifacts {
  //! <output_dir>/run-<config hash>
  std::filesystem::path run_dir;
  //! Files written, relative to run_dir, in write order.
  std::vector<std::string> files;
  //! Overall PASS flag for converge/report; true for the other commands.
  bool pass = true;
};

std::filesystem::path run_directory(const RunConfig& config, const RunnerOptions& options);

/**
 * Subcommands. Every output file starts with the config hash (a
 * "# config_hash: ..." line for CSV, a "config_hash" member for JSON).
 * Outputs contain no timestamps or thread-dependent values.
 *
 * dims.csv     kind,p,measured,closed_form
 * kernel.csv   kind,p,re,im,P,logP
 * kernel.json  per (kind, p): dim, degrees, condition number, orthonormality residual, trace, L1 norm, min
 * zeros.csv    kind,p,sample_index,re,im,multiplicity
 * atoms.csv    kind,p,sample_index,atom_at_x1
 * curvature.csv re,im,density on a 64x64 grid over [-2.5, 2.5]^2
 * zeros.json   per (kind, p): radial quantiles, angular histogram, x1 mass, annulus fraction, discrepancy
 * report.csv   series,p,value
 * report.json  convergence series, kernel growth fit, Lelong-Poincare residuals, PASS flag
 */
RunArtifacts cmd_dims(const RunConfig& config, const RunnerOptions& options, std::ostream& out);
RunArtifacts cmd_kernel(const RunConfig& config, const RunnerOptions& options, std::ostream& out);
RunArtifacts cmd_zeros(const RunConfig& config, const RunnerOptions& options, std::ostream& out);
RunArtifacts cmd_converge(const RunConfig& config, const RunnerOptions& options, std::ostream& out);
//! All of the above plus a manifest and plots, bundled into report.json.
RunArtifacts cmd_report(const RunConfig& config, const RunnerOptions& options, std::ostream& out);

}  // namespace bergman
