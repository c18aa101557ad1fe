#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "padmm/dnnsdp.hpp"

namespace padmm::cli {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSolver = 3;

/// Outcome of one (instance, solver) run.
struct RunRecord {
  std::string instance;
  std::string solver;
  std::string criterion;
  double tau = 0.0;
  int iterations = 0;
  long inner_iterations = 0;
  double wall_time = 0.0;  ///< seconds
  double eta = 0.0;
  std::string status;  ///< converged, iteration-limit or inner-failure
};

struct ProfilePoint {
  double ratio = 1.0;
  double fraction = 0.0;
};

/// Performance profile of each solver (column) over instances (rows); a cost that is
/// not finite marks a failure. Points are evaluated at every distinct finite ratio.
std::vector<std::vector<ProfilePoint>> performance_profile(
    const std::vector<std::vector<double>>& costs);

/// Applies one configuration key; keys mirror the command-line flags.
/// Throws InvalidInputError on an unknown key or malformed value.
void apply_setting(dnnsdp::SolverConfig& cfg, const std::string& key, const std::string& value);
/// Every recognized key, in flag order.
const std::vector<std::string>& setting_keys();
/// key = value lines with '#' comments; throws ParseError with the line number.
void load_config(std::istream& is, dnnsdp::SolverConfig& cfg);
void load_config_file(const std::string& path, dnnsdp::SolverConfig& cfg);

/// Solver configuration after the defaults of the variant, the optional config
/// file and the explicit settings, in that order.
struct SettingsInput {
  std::string config_file;
  std::map<std::string, std::string> settings;
};
dnnsdp::SolverConfig resolve_config(dnnsdp::Variant v, const SettingsInput& in);

struct SolveOptions {
  std::string problem;
  std::string variant = "alg1";
  SettingsInput settings;
  std::string out_prefix;  ///< writes <prefix>.summary.txt and <prefix>.trace.csv when set
  bool check_planted = false;
  std::string reference;   ///< defaults to <problem>.ref
};

struct GenerateOptions {
  std::string kind = "planted";  ///< planted or biq
  int n = 10;
  int m_e = 15;
  int m_i = 0;
  int q = 8;
  bool extended = false;
  std::uint64_t seed = 1;
  std::string out;  ///< planted also writes <out>.ref
};

struct CompareOptions {
  std::vector<std::string> instances;
  std::vector<std::string> solvers;  ///< variant:criterion[:tau]
  SettingsInput settings;
  int threads = 1;
  std::string profile_csv;
  std::string runs_csv;
};

struct VerifyOptions {
  std::string problem;
  std::string reference;  ///< defaults to <problem>.ref
  std::string variant = "alg1";
  SettingsInput settings;
  int iterations = 200;
  std::string csv;
};

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err);
int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err);

/// Runs every (instance, solver) pair; results are ordered by instance, then solver.
std::vector<RunRecord> run_matrix(const std::vector<std::string>& instances,
                                  const std::vector<std::string>& solvers,
                                  const SettingsInput& settings, int threads);

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs);
/// Columns metric, solver, ratio, fraction for the iterations, inner_iterations and time metrics.
void write_profile_csv(std::ostream& os, const std::vector<RunRecord>& runs,
                       const std::vector<std::string>& solvers);

}  // namespace padmm::cli
