#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bergman/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int report_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json j{{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bergman kernels, Fubini-Study measures and random zeros on singular plane curves"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Progress messages on stderr (repeat for more)");

  struct Command {
    const char* name;
    const char* help;
    bergman::RunArtifacts (*run)(const bergman::RunConfig&, const bergman::RunnerOptions&, std::ostream&);
  };
  const Command commands[] = {
      {"dims", "Section space dimensions next to their closed forms", bergman::cmd_dims},
      {"kernel", "Bergman kernel values and per-space diagnostics", bergman::cmd_kernel},
      {"zeros", "Zeros of seeded random sections and their averaged divisors", bergman::cmd_zeros},
      {"converge", "Convergence ladder, kernel growth exponent, Lelong-Poincare residuals", bergman::cmd_converge},
      {"report", "All of the above plus manifest and plots", bergman::cmd_report},
  };
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help)->fallthrough();
    sub->add_option("-c,--config", config_path, "TOML config file")->required();
    sub->add_option("-o,--output-dir", output_dir, "Override output_dir from the config");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("Usage", e.what(), kExitConfig);
  }

  try {
    const auto config = bergman::load_config(config_path);
    bergman::RunnerOptions options;
    options.verbosity = verbosity;
    if (!output_dir.empty()) options.output_dir = output_dir;
    for (const auto& c : commands) {
      if (!app.got_subcommand(c.name)) continue;
      c.run(config, options, std::cout);
    }
  } catch (const bergman::Error& e) {
    const int code = bergman::is_input_error(e.kind()) ? kExitConfig : kExitNumerical;
    return report_error(std::string(bergman::to_string(e.kind())), e.what(), code);
  } catch (const std::exception& e) {
    return report_error("Internal", e.what(), kExitNumerical);
  }
  return 0;
}
