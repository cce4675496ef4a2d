#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bergman/runner.hpp"
#include "bergman/svg.hpp"

namespace bergman {
namespace {

namespace fs = std::filesystem;

constexpr const char* kSmall = R"(
seed = 3
n_samples = 12
p_ladder = [2, 4]
kinds = ["w", "regular"]

[curve]
degree = 3
coeffs = [1.0, 0.0, 0.0, 0.0]

[weight]
kind = "fs"

[quadrature]
n_radial = 128
n_angular = 64

[diagnostics]
exponent_ladder = [2, 3, 4, 5]
lp_samples = 1
)";

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bergman_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind parse_error_kind(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorKind::InvalidArgument;
}

TEST(Config, ParsesDefaultsAndValues) {
  const auto c = parse_config(kSmall);
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.curve.degree, 3);
  EXPECT_EQ(c.curve.coeffs[0], Complex(1.0));
  EXPECT_EQ(c.p_ladder, (std::vector<int>{2, 4}));
  EXPECT_EQ(c.quadrature.n_radial, 128);
  EXPECT_DOUBLE_EQ(c.quadrature.s_max, 14.0);
  EXPECT_EQ(c.output_dir, "runs");
  EXPECT_TRUE(c.emit_plots);
  const auto pair = parse_config("seed = 1\n[curve]\ndegree = 2\ncoeffs = [[1, 0], [0, 2], 3]\n");
  EXPECT_EQ(pair.curve.coeffs[1], Complex(0.0, 2.0));
  EXPECT_EQ(pair.curve.coeffs[2], Complex(3.0));
}

TEST(Config, Rejections) {
  const std::string curve = "[curve]\ndegree = 3\ncoeffs = [1, 0, 0, 0]\n";
  EXPECT_EQ(parse_error_kind(curve), ErrorKind::Config);
  EXPECT_EQ(parse_error_kind("seed = -1\n" + curve), ErrorKind::Config);
  EXPECT_EQ(parse_error_kind("seed = 1\nsamples = 3\n" + curve), ErrorKind::Config);
  EXPECT_EQ(parse_error_kind("seed = 1\n" + curve + "[weight]\nkind = \"bogus\"\n"), ErrorKind::Config);
  EXPECT_EQ(parse_error_kind("seed = 1\nkinds = [\"v\"]\n" + curve), ErrorKind::Config);
  EXPECT_EQ(parse_error_kind("seed = 1\n" + curve + "[quadrature]\nn_radial = \"x\"\n"), ErrorKind::Config);
  EXPECT_EQ(parse_error_kind("seed = = 1\n"), ErrorKind::Config);
  EXPECT_THROW(load_config("/nonexistent/config.toml"), Error);
}

TEST(Config, HashIgnoresOutputDirOnly) {
  auto a = parse_config(kSmall);
  auto b = a;
  b.output_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 4;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(canonical_json(a).find("output_dir"), std::string::npos);
  EXPECT_EQ(config_hash(parse_config(kSmall)), config_hash(a));
}

TEST(Runner, DimsTable) {
  auto config = parse_config(kSmall);
  config.p_ladder = {2};
  RunnerOptions options;
  options.output_dir = scratch("dims");
  std::ostringstream out;
  const auto artifacts = cmd_dims(config, options, out);
  EXPECT_EQ(artifacts.run_dir, *options.output_dir / ("run-" + config_hash(config)));
  const auto text = slurp(artifacts.run_dir / "dims.csv");
  EXPECT_EQ(text.rfind("# config_hash: " + config_hash(config) + "\n", 0), 0u);
  const auto table = parse_csv(text);
  std::map<std::string, int> measured;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    measured[table.rows[r][0]] = std::stoi(table.rows[r][table.column("measured")]);
    EXPECT_EQ(table.rows[r][table.column("measured")], table.rows[r][table.column("closed_form")]);
  }
  EXPECT_EQ(measured["w"], 7);
  EXPECT_EQ(measured["restriction"], 6);
  EXPECT_EQ(measured["regular"], 8);
}

TEST(Runner, SmoothConicDims) {
  auto config = parse_config(kSmall);
  config.curve = {{1.0, 0.0, 0.0}, 2};
  config.p_ladder = {3};
  RunnerOptions options;
  options.output_dir = scratch("conic");
  std::ostringstream out;
  const auto table = parse_csv(slurp(cmd_dims(config, options, out).run_dir / "dims.csv"));
  for (const auto& row : table.rows) EXPECT_EQ(row[table.column("measured")], "7") << row[0];
}

TEST(Runner, ReportIsByteIdentical) {
  const auto config = parse_config(kSmall);
  RunnerOptions a;
  a.output_dir = scratch("report_a");
  RunnerOptions b;
  b.output_dir = scratch("report_b");
  std::ostringstream out;
  const auto ra = cmd_report(config, a, out);
  setenv("BERGMAN_THREADS", "2", 1);
  const auto rb = cmd_report(config, b, out);
  unsetenv("BERGMAN_THREADS");
  ASSERT_EQ(ra.files, rb.files);
  int csvs = 0;
  for (const auto& f : ra.files) {
    EXPECT_EQ(slurp(ra.run_dir / f), slurp(rb.run_dir / f)) << f;
    if (fs::path(f).extension() == ".csv") ++csvs;
  }
  EXPECT_GE(csvs, 6);

  const auto j = nlohmann::json::parse(slurp(ra.run_dir / "report.json"));
  EXPECT_EQ(j.at("config_hash"), config_hash(config));
  EXPECT_TRUE(j.contains("pass"));
  EXPECT_TRUE(j.at("manifest").contains("config"));
  EXPECT_TRUE(fs::exists(ra.run_dir / "zeros.svg"));
  EXPECT_EQ(slurp(ra.run_dir / "l1_decay.svg").rfind("<svg", 0), 0u);
}

int run_cli(const std::string& args, const fs::path& stderr_path) {
  const std::string cmd = std::string(BERGMAN_CLI) + " " + args + " > /dev/null 2> " + stderr_path.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodesAndErrorJson) {
  const auto dir = scratch("cli");
  const auto err = dir / "stderr.txt";
  {
    std::ofstream(dir / "no_seed.toml") << "[curve]\ndegree = 3\ncoeffs = [1, 0, 0, 0]\n";
    std::ofstream(dir / "bad_curve.toml") << "seed = 1\n[curve]\ndegree = 3\ncoeffs = [0, 0, 0, 1]\n";
    std::ofstream(dir / "small.toml") << kSmall;
  }
  EXPECT_EQ(run_cli("dims -c " + (dir / "no_seed.toml").string(), err), 2);
  const auto j = nlohmann::json::parse(slurp(err));
  EXPECT_EQ(j.at("error"), "Config");
  EXPECT_EQ(j.at("exit_code"), 2);

  EXPECT_EQ(run_cli("dims -c " + (dir / "bad_curve.toml").string(), err), 2);
  const auto curve_error = nlohmann::json::parse(slurp(err));
  EXPECT_EQ(curve_error.at("error"), "Config");
  EXPECT_NE(curve_error.at("message").get<std::string>().find("ZeroLeadingCoefficient"), std::string::npos);
  EXPECT_EQ(run_cli("frobnicate", err), 2);
  EXPECT_EQ(run_cli("dims", err), 2);

  EXPECT_EQ(run_cli("dims -v -c " + (dir / "small.toml").string() + " -o " + (dir / "out").string(), err), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / ("run-" + config_hash(parse_config(kSmall))) / "dims.csv"));
}

}  // namespace
}  // namespace bergman
