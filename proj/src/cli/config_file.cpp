#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>

#include "padmm/cli.hpp"
#include "padmm/errors.hpp"

namespace padmm::cli {

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw InvalidInputError("setting " + key + ": malformed number '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw InvalidInputError("setting " + key + ": malformed integer '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw InvalidInputError("setting " + key + ": malformed boolean '" + v + "'");
}

using Setter = std::function<void(dnnsdp::SolverConfig&, const std::string&, const std::string&)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
  using C = dnnsdp::SolverConfig;
  using K = const std::string&;
  static const std::vector<std::pair<std::string, Setter>> table{
      {"sigma", [](C& c, K k, K v) { c.engine.sigma = to_double(k, v); }},
      {"tau", [](C& c, K k, K v) { c.engine.tau = to_double(k, v); }},
      {"criterion", [](C& c, K, K v) { c.engine.criterion = admm::criterion_from_string(v); }},
      {"mu-cap", [](C& c, K k, K v) { c.engine.mu.cap = to_double(k, v); }},
      {"mu-power", [](C& c, K k, K v) { c.engine.mu.power = to_double(k, v); }},
      {"nu-cap", [](C& c, K k, K v) { c.engine.nu.cap = to_double(k, v); }},
      {"nu-power", [](C& c, K k, K v) { c.engine.nu.power = to_double(k, v); }},
      {"gamma", [](C& c, K k, K v) { c.engine.gamma = to_double(k, v); }},
      {"descent-gamma", [](C& c, K k, K v) { c.engine.descent_gamma = to_double(k, v); }},
      {"allow-large-tau", [](C& c, K k, K v) { c.engine.allow_large_tau = to_bool(k, v); }},
      {"strict-c2", [](C& c, K k, K v) { c.engine.strict_c2 = to_bool(k, v); }},
      {"tol", [](C& c, K k, K v) { c.engine.eta_tol = to_double(k, v); }},
      {"kmax", [](C& c, K k, K v) { c.engine.k_max = to_int(k, v); }},
      {"inner-cap", [](C& c, K k, K v) { c.engine.inner_cap = to_int(k, v); }},
      {"epsilon", [](C& c, K k, K v) { c.epsilon = to_double(k, v); }},
      {"adapt", [](C& c, K k, K v) { c.policy.enabled = to_bool(k, v); }},
      {"window", [](C& c, K k, K v) { c.policy.window = to_int(k, v); }},
      {"threshold", [](C& c, K k, K v) { c.policy.imbalance_threshold = to_double(k, v); }},
      {"factor", [](C& c, K k, K v) { c.policy.scale_factor = to_double(k, v); }},
      {"sigma-min", [](C& c, K k, K v) { c.policy.sigma_min = to_double(k, v); }},
      {"sigma-max", [](C& c, K k, K v) { c.policy.sigma_max = to_double(k, v); }},
      {"restart-window", [](C& c, K k, K v) { c.policy.restart_window = to_int(k, v); }},
      {"stall", [](C& c, K k, K v) { c.policy.restart_stall_fraction = to_double(k, v); }},
      {"raise-on-primal", [](C& c, K k, K v) { c.policy.raise_on_primal = to_bool(k, v); }},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(dnnsdp::SolverConfig& cfg, const std::string& key, const std::string& value) {
  std::string k = key;
  std::replace(k.begin(), k.end(), '_', '-');
  for (const auto& [name, set] : setters())
    if (name == k) {
      set(cfg, k, value);
      return;
    }
  throw InvalidInputError("unknown setting '" + key + "'");
}

void load_config(std::istream& is, dnnsdp::SolverConfig& cfg) {
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_setting(cfg, key, value);
    } catch (const InvalidInputError& e) {
      throw ParseError(no, e.what());
    }
  }
}

void load_config_file(const std::string& path, dnnsdp::SolverConfig& cfg) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config '" + path + "'");
  load_config(is, cfg);
}

dnnsdp::SolverConfig resolve_config(dnnsdp::Variant v, const SettingsInput& in) {
  dnnsdp::SolverConfig cfg = dnnsdp::default_solver_config(v);
  if (!in.config_file.empty()) load_config_file(in.config_file, cfg);
  for (const auto& [k, val] : in.settings) apply_setting(cfg, k, val);
  // Schedules left at the absolute-criterion default follow the chosen criterion.
  const admm::ErrorSchedule c1 = admm::default_schedule(admm::Criterion::c1, cfg.engine.tau);
  const admm::ErrorSchedule fit =
      admm::default_schedule(cfg.engine.criterion, cfg.engine.tau, cfg.engine.gamma);
  auto untouched = [&](const admm::ErrorSchedule& s) { return s.cap == c1.cap && s.power == c1.power; };
  if (untouched(cfg.engine.mu)) cfg.engine.mu = fit;
  if (untouched(cfg.engine.nu)) cfg.engine.nu = fit;
  return cfg;
}

}  // namespace padmm::cli
