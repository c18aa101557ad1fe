#include "padmm/dnnsdp.hpp"
#include "padmm/errors.hpp"

namespace padmm::dnnsdp {

SolverConfig default_solver_config(Variant v) {
  SolverConfig cfg;
  cfg.engine.tau = 1.618;
  cfg.engine.criterion = is_baseline(v) ? admm::Criterion::single_sweep : admm::Criterion::c1;
  cfg.engine.mu = {0.1, 1.001};
  cfg.engine.nu = {0.1, 1.001};
  cfg.engine.eta_tol = 1e-6;
  cfg.engine.k_max = (v == Variant::alg1 || v == Variant::admm3d) ? 20000 : 40000;
  cfg.epsilon = 1e-5;
  return cfg;
}

DnnsdpResult solve_dnnsdp(
    const DnnsdpProblem& p, Variant v, const SolverConfig& cfg,
    const std::function<void(const Formulation&, const admm::IterationEvent&)>& observer) {
  cfg.policy.validate();
  admm::EngineConfig ec = cfg.engine;
  if (is_baseline(v)) ec.criterion = admm::Criterion::single_sweep;
  admm::require_valid(ec);
  auto form = make_formulation(p, v, cfg.epsilon);
  const AdaptationPolicy& policy = cfg.policy;

  DnnsdpResult res;
  std::vector<ResidualReport> reports;
  std::vector<double> etas;
  int since_restart = 0;

  const admm::Monitor monitor = [&](const admm::IterationEvent& ev,
                                    const admm::TraceRecord& rec) -> admm::Directive {
    const ResidualReport r = kkt_residuals(p, form->unpack(ev.step.state));
    IterationLog log{rec, r, false};
    reports.push_back(r);
    etas.push_back(r.eta);
    admm::Directive d;
    if (r.eta < ec.eta_tol) {
      d.stop = true;
    } else if (policy.enabled) {
      ++since_restart;
      double sigma = ev.sigma;
      const auto w = static_cast<std::size_t>(policy.window);
      const std::span<const ResidualReport> recent(reports.data() + reports.size() - std::min(w, reports.size()),
                                                   std::min(w, reports.size()));
      if (rec.k % policy.window == 0 && reports.size() >= w)
        sigma = adapt_sigma(recent, sigma, policy);
      if (since_restart >= policy.restart_window && restart_check(etas, policy)) {
        sigma = adapt_sigma(recent, ev.sigma, policy, true);
        log.restarted = true;
        ++res.restarts;
        since_restart = 0;
      }
      if (sigma != ev.sigma) d.sigma = sigma;
    }
    res.trace.push_back(log);
    return d;
  };

  admm::Observer obs;
  if (observer) obs = [&](const admm::IterationEvent& ev) { observer(*form, ev); };

  const DualIterate init = DualIterate::zeros(p, uses_slack(v));
  admm::SolveResult sr;
  try {
    sr = admm::solve(*form, ec, form->pack(init), monitor, obs);
  } catch (const ConvergenceFailure& e) {
    res.status = admm::Status::inner_failure;
    res.message = e.what();
    res.iterate = init;
    res.residuals = kkt_residuals(p, init);
    res.iterations = static_cast<int>(res.trace.size());
    return res;
  }
  res.status = sr.status;
  res.message = sr.message;
  res.iterate = form->unpack(sr.state);
  res.residuals = kkt_residuals(p, res.iterate);
  res.iterations = static_cast<int>(sr.trace.size());
  for (const auto& t : sr.trace) {
    res.inner_x_total += t.inner_x;
    res.inner_y_total += t.inner_y;
  }
  res.primal_value = primal_objective(p, res.iterate);
  res.dual_value = dual_objective(p, res.iterate);
  res.final_sigma = sr.trace.empty() ? ec.sigma : sr.trace.back().sigma;
  return res;
}

}  // namespace padmm::dnnsdp
