#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "padmm/cli.hpp"

namespace {

/// Registers one flag per configuration key; only flags given on the command line are kept.
void add_settings(CLI::App& app, padmm::cli::SettingsInput& in,
                  std::map<std::string, std::string>& raw) {
  app.add_option("--config", in.config_file, "key = value file with solver settings");
  for (const auto& key : padmm::cli::setting_keys())
    app.add_option("--" + key, raw[key], "solver setting " + key);
}

void collect(const CLI::App& app, padmm::cli::SettingsInput& in,
             const std::map<std::string, std::string>& raw) {
  for (const auto& [key, value] : raw)
    if (app.count("--" + key) > 0) in.settings[key] = value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact indefinite proximal ADMM for doubly nonnegative SDPs"};
  app.require_subcommand(1);

  padmm::cli::SolveOptions solve;
  std::map<std::string, std::string> solve_raw;
  auto* s = app.add_subcommand("solve", "solve a problem file");
  s->add_option("problem", solve.problem, "problem file")->required();
  s->add_option("--variant", solve.variant, "alg1, alg2, alg3, admm3d, padmm4d or admm4d");
  s->add_option("--out", solve.out_prefix, "prefix for the summary and trace files");
  s->add_flag("--check-planted", solve.check_planted, "evaluate residuals at the reference");
  s->add_option("--reference", solve.reference, "reference file (default <problem>.ref)");
  add_settings(*s, solve.settings, solve_raw);

  padmm::cli::GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "write a seeded instance");
  g->add_option("kind", gen.kind, "planted or biq")->required();
  g->add_option("--n", gen.n, "matrix order (planted)");
  g->add_option("--me", gen.m_e, "equality rows (planted)");
  g->add_option("--mi", gen.m_i, "inequality rows (planted)");
  g->add_option("--q", gen.q, "binary dimension (biq)");
  g->add_flag("--extended", gen.extended, "add pair inequalities (biq)");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("--out", gen.out, "output problem file; planted also writes <out>.ref");

  padmm::cli::CompareOptions cmp;
  std::map<std::string, std::string> cmp_raw;
  auto* c = app.add_subcommand("compare", "performance profiles over instances and solvers");
  c->add_option("--instances", cmp.instances, "problem files")->required();
  c->add_option("--solvers", cmp.solvers, "variant:criterion[:tau] entries")->required();
  c->add_option("--threads", cmp.threads, "worker threads");
  c->add_option("--profile", cmp.profile_csv, "profile CSV (default stdout)");
  c->add_option("--runs", cmp.runs_csv, "per-run CSV");
  add_settings(*c, cmp.settings, cmp_raw);

  padmm::cli::VerifyOptions ver;
  std::map<std::string, std::string> ver_raw;
  auto* v = app.add_subcommand("verify", "check the one-step inequalities on a planted run");
  v->add_option("problem", ver.problem, "planted problem file")->required();
  v->add_option("--reference", ver.reference, "reference file (default <problem>.ref)");
  v->add_option("--variant", ver.variant, "algorithm variant");
  v->add_option("--iterations", ver.iterations, "iterations to record");
  v->add_option("--csv", ver.csv, "margin CSV output");
  add_settings(*v, ver.settings, ver_raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : padmm::cli::kExitValidation;
  }

  if (s->parsed()) {
    collect(*s, solve.settings, solve_raw);
    return padmm::cli::cmd_solve(solve, std::cout, std::cerr);
  }
  if (g->parsed()) return padmm::cli::cmd_generate(gen, std::cout, std::cerr);
  if (c->parsed()) {
    collect(*c, cmp.settings, cmp_raw);
    return padmm::cli::cmd_compare(cmp, std::cout, std::cerr);
  }
  collect(*v, ver.settings, ver_raw);
  return padmm::cli::cmd_verify(ver, std::cout, std::cerr);
}
