#include "bergman/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

namespace bergman {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw Error(ErrorKind::Config, key + ": " + message);
}

void reject_unknown(const toml::table& table, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, node] : table) {
    if (!allowed.count(std::string(key.str()))) fail(prefix + std::string(key.str()), "unknown key");
  }
}

double as_real(const toml::node& node, const std::string& key) {
  if (auto v = node.value<double>()) return *v;
  fail(key, "expected a number");
}

std::int64_t as_int(const toml::node& node, const std::string& key) {
  if (!node.is_integer()) fail(key, "expected an integer");
  return *node.value<std::int64_t>();
}

int as_positive_int(const toml::node& node, const std::string& key) {
  const auto v = as_int(node, key);
  if (v < 1 || v > 1'000'000'000) fail(key, "expected a positive integer");
  return static_cast<int>(v);
}

const toml::array& as_array(const toml::node& node, const std::string& key) {
  if (!node.is_array()) fail(key, "expected an array");
  return *node.as_array();
}

std::string as_string(const toml::node& node, const std::string& key) {
  if (!node.is_string()) fail(key, "expected a string");
  return *node.value<std::string>();
}

std::vector<int> int_list(const toml::node& node, const std::string& key) {
  std::vector<int> out;
  for (const auto& item : as_array(node, key)) out.push_back(as_positive_int(item, key));
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k] <= out[k - 1]) fail(key, "must be strictly increasing");
  if (out.empty()) fail(key, "must not be empty");
  return out;
}

Complex as_complex(const toml::node& node, const std::string& key) {
  if (node.is_array()) {
    const auto& pair = *node.as_array();
    if (pair.size() != 2) fail(key, "complex coefficients are [re, im]");
    return {as_real(*pair.get(0), key), as_real(*pair.get(1), key)};
  }
  return {as_real(node, key), 0.0};
}

const toml::table& as_table(const toml::node& node, const std::string& key) {
  if (!node.is_table()) fail(key, "expected a table");
  return *node.as_table();
}

}  // namespace

RunConfig parse_config(std::string_view toml_text, std::string_view source) {
  toml::table root;
  try {
    root = toml::parse(toml_text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line;
    throw Error(ErrorKind::Config, msg.str());
  }
  reject_unknown(root,
                 {"seed", "n_samples", "output_dir", "emit_plots", "p_ladder", "kinds", "curve", "weight",
                  "quadrature", "diagnostics"},
                 "");

  RunConfig cfg;
  const auto* seed = root.get("seed");
  if (!seed) fail("seed", "required (runs are never seeded from entropy)");
  const auto seed_value = as_int(*seed, "seed");
  if (seed_value < 0) fail("seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed_value);

  if (const auto* n = root.get("n_samples")) cfg.n_samples = as_positive_int(*n, "n_samples");
  if (const auto* n = root.get("output_dir")) cfg.output_dir = as_string(*n, "output_dir");
  if (const auto* n = root.get("emit_plots")) {
    if (!n->is_boolean()) fail("emit_plots", "expected true or false");
    cfg.emit_plots = *n->value<bool>();
  }
  if (const auto* n = root.get("p_ladder")) cfg.p_ladder = int_list(*n, "p_ladder");
  if (const auto* n = root.get("kinds")) {
    cfg.kinds.clear();
    for (const auto& item : as_array(*n, "kinds")) cfg.kinds.push_back(parse_space_kind(as_string(item, "kinds")));
    if (cfg.kinds.empty()) fail("kinds", "must not be empty");
  }

  const auto* curve = root.get("curve");
  if (!curve) fail("curve", "required");
  {
    const auto& t = as_table(*curve, "curve");
    reject_unknown(t, {"degree", "coeffs"}, "curve.");
    if (!t.get("degree")) fail("curve.degree", "required");
    if (!t.get("coeffs")) fail("curve.coeffs", "required");
    cfg.curve.degree = static_cast<int>(as_int(*t.get("degree"), "curve.degree"));
    for (const auto& item : as_array(*t.get("coeffs"), "curve.coeffs"))
      cfg.curve.coeffs.push_back(as_complex(item, "curve.coeffs"));
  }

  if (const auto* n = root.get("weight")) {
    const auto& t = as_table(*n, "weight");
    reject_unknown(t, {"kind"}, "weight.");
    if (const auto* k = t.get("kind")) cfg.weight = as_string(*k, "weight.kind");
    if (cfg.weight != "fs" && cfg.weight != "logplus" && cfg.weight != "smooth_radial_fs")
      fail("weight.kind", "expected fs, logplus or smooth_radial_fs, got '" + cfg.weight + "'");
  }

  if (const auto* n = root.get("quadrature")) {
    const auto& t = as_table(*n, "quadrature");
    reject_unknown(t, {"n_radial", "n_angular", "split_radii", "s_min", "s_max"}, "quadrature.");
    auto& q = cfg.quadrature;
    if (const auto* v = t.get("n_radial")) q.n_radial = as_positive_int(*v, "quadrature.n_radial");
    if (const auto* v = t.get("n_angular")) q.n_angular = as_positive_int(*v, "quadrature.n_angular");
    if (const auto* v = t.get("s_min")) q.s_min = as_real(*v, "quadrature.s_min");
    if (const auto* v = t.get("s_max")) q.s_max = as_real(*v, "quadrature.s_max");
    if (const auto* v = t.get("split_radii"))
      for (const auto& item : as_array(*v, "quadrature.split_radii"))
        q.split_radii.push_back(as_real(item, "quadrature.split_radii"));
  }

  if (const auto* n = root.get("diagnostics")) {
    const auto& t = as_table(*n, "diagnostics");
    reject_unknown(t, {"exponent_ladder", "eval_radius", "lp_samples"}, "diagnostics.");
    auto& dg = cfg.diagnostics;
    if (const auto* v = t.get("exponent_ladder")) dg.exponent_ladder = int_list(*v, "diagnostics.exponent_ladder");
    if (const auto* v = t.get("eval_radius")) dg.eval_radius = as_real(*v, "diagnostics.eval_radius");
    if (const auto* v = t.get("lp_samples")) dg.lp_samples = as_positive_int(*v, "diagnostics.lp_samples");
    if (!(dg.eval_radius > 0)) fail("diagnostics.eval_radius", "must be positive");
  }

  // Sub-configs validate themselves; convert their errors to config errors here.
  try {
    const auto c = make_curve(cfg);
    (void)make_weight(cfg, c);
    (void)build_grid(cfg.quadrature);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(ErrorKind::Config, e.what());
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::string canonical_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["curve"]["degree"] = cfg.curve.degree;
  auto coeffs = nlohmann::ordered_json::array();
  for (const auto& a : cfg.curve.coeffs) coeffs.push_back({a.real(), a.imag()});
  j["curve"]["coeffs"] = coeffs;
  j["weight"] = cfg.weight;
  auto kinds = nlohmann::ordered_json::array();
  for (auto k : cfg.kinds) kinds.push_back(to_string(k));
  j["kinds"] = kinds;
  j["p_ladder"] = cfg.p_ladder;
  j["quadrature"] = {{"n_radial", cfg.quadrature.n_radial},
                     {"n_angular", cfg.quadrature.n_angular},
                     {"split_radii", cfg.quadrature.split_radii},
                     {"s_min", cfg.quadrature.s_min},
                     {"s_max", cfg.quadrature.s_max}};
  j["n_samples"] = cfg.n_samples;
  j["seed"] = cfg.seed;
  j["emit_plots"] = cfg.emit_plots;
  j["diagnostics"] = {{"exponent_ladder", cfg.diagnostics.exponent_ladder},
                      {"eval_radius", cfg.diagnostics.eval_radius},
                      {"lp_samples", cfg.diagnostics.lp_samples}};
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PlaneCurve make_curve(const RunConfig& cfg) { return new_curve(cfg.curve.coeffs, cfg.curve.degree); }

Weight make_weight(const RunConfig& cfg, const PlaneCurve& curve) {
  if (cfg.weight == "fs") return Weight::fubini_study(curve);
  if (cfg.weight == "logplus") return Weight::log_plus(curve.degree());
  if (cfg.weight == "smooth_radial_fs") return Weight::smooth_radial_fs(curve.degree());
  throw Error(ErrorKind::Config, "weight.kind: unknown weight '" + cfg.weight + "'");
}

}  // namespace bergman
