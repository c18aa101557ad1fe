#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "padmm/cli.hpp"
#include "padmm/errors.hpp"
#include "padmm/problems.hpp"
#include "padmm/verify.hpp"

namespace padmm::cli {

namespace {

using dnnsdp::DnnsdpProblem;
using dnnsdp::ResidualReport;
using dnnsdp::Variant;

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Configuration stage: failures here are validation errors.
dnnsdp::SolverConfig checked_config(Variant v, const SettingsInput& in) {
  dnnsdp::SolverConfig cfg = resolve_config(v, in);
  cfg.policy.validate();
  admm::EngineConfig ec = cfg.engine;
  if (dnnsdp::is_baseline(v)) ec.criterion = admm::Criterion::single_sweep;
  admm::require_valid(ec);
  return cfg;
}

DnnsdpProblem load_problem(const std::string& path) {
  DnnsdpProblem p = problems::read_problem(path);
  p.validate();
  return p;
}

void write_report(std::ostream& os, const ResidualReport& r) {
  os << "eta " << fmt(r.eta) << '\n'
     << "eta_P " << fmt(r.eta_P) << '\n'
     << "eta_D " << fmt(r.eta_D) << '\n'
     << "eta_S " << fmt(r.eta_S) << '\n'
     << "eta_K " << fmt(r.eta_K) << '\n'
     << "eta_Sstar " << fmt(r.eta_Sstar) << '\n'
     << "eta_Kstar " << fmt(r.eta_Kstar) << '\n'
     << "eta_C1 " << fmt(r.eta_C1) << '\n'
     << "eta_C2 " << fmt(r.eta_C2) << '\n';
  if (r.inequalities) os << "eta_I " << fmt(r.eta_I) << '\n' << "eta_Istar " << fmt(r.eta_Istar) << '\n';
}

void write_summary(std::ostream& os, Variant v, const dnnsdp::SolverConfig& cfg,
                   const dnnsdp::DnnsdpResult& res) {
  const admm::Criterion crit =
      dnnsdp::is_baseline(v) ? admm::Criterion::single_sweep : cfg.engine.criterion;
  os << "variant " << dnnsdp::to_string(v) << '\n'
     << "criterion " << admm::to_string(crit) << '\n'
     << "tau " << fmt(cfg.engine.tau) << '\n'
     << "status " << admm::to_string(res.status) << '\n'
     << "iterations " << res.iterations << '\n'
     << "restarts " << res.restarts << '\n'
     << "inner_x " << res.inner_x_total << '\n'
     << "inner_y " << res.inner_y_total << '\n'
     << "final_sigma " << fmt(res.final_sigma) << '\n'
     << "primal_value " << fmt(res.primal_value) << '\n'
     << "dual_value " << fmt(res.dual_value) << '\n';
  write_report(os, res.residuals);
  if (!res.message.empty()) os << "message " << res.message << '\n';
}

void write_trace(std::ostream& os, const dnnsdp::DnnsdpResult& res) {
  os << "k,eta,eta_P,eta_D,eta_S,eta_K,eta_Sstar,eta_Kstar,eta_C1,eta_C2,eta_I,eta_Istar,"
        "sigma,inner_x,inner_y,restarted\n";
  for (const auto& t : res.trace) {
    const ResidualReport& r = t.residuals;
    os << t.engine.k << ',' << fmt(r.eta) << ',' << fmt(r.eta_P) << ',' << fmt(r.eta_D) << ','
       << fmt(r.eta_S) << ',' << fmt(r.eta_K) << ',' << fmt(r.eta_Sstar) << ','
       << fmt(r.eta_Kstar) << ',' << fmt(r.eta_C1) << ',' << fmt(r.eta_C2) << ','
       << fmt(r.eta_I) << ',' << fmt(r.eta_Istar) << ',' << fmt(t.engine.sigma) << ','
       << t.engine.inner_x << ',' << t.engine.inner_y << ',' << (t.restarted ? 1 : 0) << '\n';
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  return os;
}

/// Runs a command body, mapping error classes to exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const admm::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InvalidInputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}

struct SolverSpec {
  Variant variant;
  std::optional<admm::Criterion> criterion;
  std::optional<double> tau;
};

SolverSpec parse_solver(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ':');) parts.push_back(t);
  if (parts.empty() || parts.size() > 3) throw InvalidInputError("bad solver spec '" + s + "'");
  SolverSpec spec{dnnsdp::variant_from_string(parts[0]), std::nullopt, std::nullopt};
  if (parts.size() >= 2) spec.criterion = admm::criterion_from_string(parts[1]);
  if (parts.size() == 3) {
    double t = 0.0;
    const char* end = parts[2].data() + parts[2].size();
    const auto res = std::from_chars(parts[2].data(), end, t);
    if (res.ec != std::errc() || res.ptr != end)
      throw InvalidInputError("bad step size in solver spec '" + s + "'");
    spec.tau = t;
  }
  return spec;
}

dnnsdp::SolverConfig spec_config(const SolverSpec& spec, const SettingsInput& settings) {
  SettingsInput merged = settings;
  if (spec.criterion) merged.settings["criterion"] = admm::to_string(*spec.criterion);
  if (spec.tau) merged.settings["tau"] = fmt(*spec.tau);
  dnnsdp::SolverConfig cfg = resolve_config(spec.variant, merged);
  cfg.policy.validate();
  admm::EngineConfig ec = cfg.engine;
  if (dnnsdp::is_baseline(spec.variant)) ec.criterion = admm::Criterion::single_sweep;
  admm::require_valid(ec);
  return cfg;
}

std::string default_reference(const std::string& problem, const std::string& given) {
  return given.empty() ? problem + ".ref" : given;
}

}  // namespace

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Variant v = dnnsdp::variant_from_string(opt.variant);
    const dnnsdp::SolverConfig cfg = checked_config(v, opt.settings);
    DnnsdpProblem p;
    try {
      p = load_problem(opt.problem);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(0, e.what());
    }

    if (opt.check_planted) {
      const auto ref = problems::read_reference(default_reference(opt.problem, opt.reference), p);
      const dnnsdp::DualIterate it =
          dnnsdp::uses_slack(v) ? problems::with_slack(ref) : ref.solution;
      const ResidualReport r = dnnsdp::kkt_residuals(p, it);
      out << "reference check\n";
      write_report(out, r);
      const bool ok = r.eta <= 1e-10;
      out << "planted " << (ok ? "ok" : "failed") << '\n';
      return ok ? kExitOk : kExitSolver;
    }

    const dnnsdp::DnnsdpResult res = dnnsdp::solve_dnnsdp(p, v, cfg);
    write_summary(out, v, cfg, res);
    if (!opt.out_prefix.empty()) {
      auto sum = open_out(opt.out_prefix + ".summary.txt");
      write_summary(sum, v, cfg, res);
      auto tr = open_out(opt.out_prefix + ".trace.csv");
      write_trace(tr, res);
    }
    if (res.status != admm::Status::converged) {
      err << "error: solver stopped with status " << admm::to_string(res.status);
      if (!res.message.empty()) err << ": " << res.message;
      err << '\n';
      return kExitSolver;
    }
    return kExitOk;
  });
}

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.kind == "planted") {
      const auto inst = problems::gen_planted(opt.seed, opt.n, opt.m_e, opt.m_i);
      if (opt.out.empty()) {
        problems::write_problem(out, inst.problem);
      } else {
        problems::write_problem(opt.out, inst.problem);
        problems::write_reference(opt.out + ".ref", inst);
      }
      return kExitOk;
    }
    if (opt.kind == "biq") {
      const auto b = problems::gen_biq(opt.seed, opt.q, opt.extended);
      const auto p = problems::biq_to_dnnsdp(b.Q, b.extended, opt.seed);
      if (opt.out.empty())
        problems::write_problem(out, p);
      else
        problems::write_problem(opt.out, p);
      return kExitOk;
    }
    throw InvalidInputError("unknown instance kind '" + opt.kind + "'");
  });
}

std::vector<RunRecord> run_matrix(const std::vector<std::string>& instances,
                                  const std::vector<std::string>& solvers,
                                  const SettingsInput& settings, int threads) {
  std::vector<SolverSpec> specs;
  std::vector<dnnsdp::SolverConfig> configs;
  for (const auto& s : solvers) {
    specs.push_back(parse_solver(s));
    configs.push_back(spec_config(specs.back(), settings));
  }
  std::vector<std::optional<DnnsdpProblem>> problems(instances.size());
  std::vector<std::string> load_errors(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    try {
      problems[i] = load_problem(instances[i]);
    } catch (const Error& e) {
      load_errors[i] = e.what();
    }
  }

  const std::size_t total = instances.size() * solvers.size();
  std::vector<RunRecord> runs(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < total; t = next++) {
      const std::size_t i = t / solvers.size();
      const std::size_t s = t % solvers.size();
      RunRecord& r = runs[t];
      r.instance = instances[i];
      r.solver = solvers[s];
      const auto& cfg = configs[s];
      r.criterion = admm::to_string(dnnsdp::is_baseline(specs[s].variant)
                                        ? admm::Criterion::single_sweep
                                        : cfg.engine.criterion);
      r.tau = cfg.engine.tau;
      r.eta = std::numeric_limits<double>::infinity();
      r.status = admm::to_string(admm::Status::inner_failure);
      if (!problems[i]) continue;
      try {
        const auto start = std::chrono::steady_clock::now();
        const auto res = dnnsdp::solve_dnnsdp(*problems[i], specs[s].variant, cfg);
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        r.iterations = res.iterations;
        r.inner_iterations = res.inner_x_total + res.inner_y_total;
        r.eta = res.residuals.eta;
        r.status = admm::to_string(res.status);
      } catch (const Error&) {
        // Recorded as a failed run; the comparison continues.
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return runs;
}

int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.instances.empty()) throw InvalidInputError("compare needs at least one instance");
    if (opt.solvers.size() < 2) throw InvalidInputError("compare needs at least two solvers");
    const auto runs = run_matrix(opt.instances, opt.solvers, opt.settings, opt.threads);
    if (!opt.runs_csv.empty()) {
      auto os = open_out(opt.runs_csv);
      write_runs_csv(os, runs);
    }
    if (opt.profile_csv.empty()) {
      write_profile_csv(out, runs, opt.solvers);
    } else {
      auto os = open_out(opt.profile_csv);
      write_profile_csv(os, runs, opt.solvers);
    }
    int converged = 0;
    for (const auto& r : runs) converged += r.status == "converged";
    err << converged << " of " << runs.size() << " runs converged\n";
    return kExitOk;
  });
}

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Variant v = dnnsdp::variant_from_string(opt.variant);
    dnnsdp::SolverConfig cfg = checked_config(v, opt.settings);
    if (opt.iterations < 1) throw InvalidInputError("verify needs at least one iteration");
    cfg.engine.k_max = opt.iterations;
    DnnsdpProblem p;
    problems::PlantedInstance ref;
    try {
      p = load_problem(opt.problem);
      ref = problems::read_reference(default_reference(opt.problem, opt.reference), p);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(0, e.what());
    }
    const dnnsdp::DualIterate star = dnnsdp::uses_slack(v) ? problems::with_slack(ref) : ref.solution;

    std::unique_ptr<verify::TheoryRecorder> recorder;
    const auto res = dnnsdp::solve_dnnsdp(
        p, v, cfg, [&](const dnnsdp::Formulation& form, const admm::IterationEvent& ev) {
          if (!recorder)
            recorder = std::make_unique<verify::TheoryRecorder>(form, form.pack(star), cfg.engine);
          recorder->observe(ev);
        });
    if (!recorder) throw Error("no iterations were recorded");
    const verify::TheoryTrace& trace = recorder->trace();
    const auto l1 = verify::summarize_lemma1(trace);
    const bool descent_applies = cfg.engine.criterion == admm::Criterion::c1 ||
                                 cfg.engine.criterion == admm::Criterion::exact;
    out << "status " << admm::to_string(res.status) << '\n'
        << "iterations " << res.iterations << '\n'
        << "lemma1_checked " << l1.evaluated << '\n'
        << "lemma1_violations " << l1.violations << '\n'
        << "lemma1_worst_scaled " << fmt(l1.worst) << '\n';
    int violations = l1.violations;
    if (descent_applies) {
      const auto d = verify::summarize_descent(trace);
      out << "descent_checked " << d.evaluated << '\n'
          << "descent_violations " << d.violations << '\n'
          << "descent_worst_scaled " << fmt(d.worst) << '\n';
      violations += d.violations;
    } else {
      out << "descent_checked 0\n";
    }
    if (!opt.csv.empty()) {
      auto os = open_out(opt.csv);
      verify::write_margin_csv(os, trace);
    }
    if (violations > 0) {
      err << "error: " << violations << " theory violations\n";
      return kExitSolver;
    }
    return kExitOk;
  });
}

}  // namespace padmm::cli
