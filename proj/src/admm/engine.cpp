#include <algorithm>
#include <cmath>

#include "padmm/admm.hpp"

namespace padmm::admm {

std::string to_string(Status s) {
  switch (s) {
    case Status::converged: return "converged";
    case Status::iteration_limit: return "iteration-limit";
    case Status::inner_failure: return "inner-failure";
  }
  return "?";
}

BlockTarget::BlockTarget(Criterion criterion, double tolerance, double floor, double norm_scale,
                         int inner_cap, StepMetric metric)
    : criterion_(criterion),
      tolerance_(tolerance),
      floor_(floor),
      norm_scale_(norm_scale),
      inner_cap_(inner_cap),
      metric_(std::move(metric)) {}

BlockTarget::Evaluation BlockTarget::evaluate(const Vector& candidate,
                                              const Vector& certificate) const {
  Evaluation e;
  e.norm = certificate.norm() * norm_scale_;
  e.floor = floor_;
  switch (criterion_) {
    case Criterion::c1:
      // A zero schedule value degenerates to the exact test.
      e.accepted = tolerance_ > 0.0 ? e.norm <= tolerance_
                                    : e.norm <= 1e-12 * (1.0 + candidate.norm());
      break;
    case Criterion::c2:
    case Criterion::c2_prime:
      e.metric = metric_(candidate);
      e.accepted = e.norm <= std::max(tolerance_ * e.metric, floor_);
      break;
    case Criterion::exact: e.accepted = e.norm <= 1e-12 * (1.0 + candidate.norm()); break;
    case Criterion::single_sweep: e.accepted = true; break;
  }
  return e;
}

InnerConvergenceError::InnerConvergenceError(const std::string& block,
                                             const InexactCertificate& cert,
                                             const std::string& why)
    : Error(block + " block not accepted: " + why + " (x-certificate " +
            std::to_string(cert.xi_norm) + " after " + std::to_string(cert.inner_x) +
            " sweeps, y-certificate " + std::to_string(cert.eta_norm) + " after " +
            std::to_string(cert.inner_y) + " sweeps)"),
      cert_(cert) {}

namespace {

bool is_relative(Criterion c) { return c == Criterion::c2 || c == Criterion::c2_prime; }

double metric(double quad) { return std::sqrt(std::max(0.0, quad)); }

}  // namespace

StepResult outer_iterate(BlockProblem& problem, const IterateState& state, const EngineConfig& cfg,
                         int k) {
  const double sigma = cfg.sigma;
  const Criterion crit = cfg.criterion;
  const bool relative = is_relative(crit);
  const double fx = relative ? 1.0 / std::sqrt(problem.x_metric_floor(sigma)) : 1.0;
  const double fy = relative ? 1.0 / std::sqrt(problem.y_metric_floor(sigma)) : 1.0;
  const double floor = relative && !cfg.strict_c2 ? problem.relaxed_floor(state, sigma) : 0.0;

  auto x_metric = [&](const Vector& cand) {
    return metric(problem.x_quadratic(cand - state.x, sigma, {}));
  };
  auto y_metric = [&](const Vector& cand) {
    return metric(problem.y_quadratic(cand - state.y, sigma, {}));
  };

  const BlockTarget x_target(crit, cfg.mu.at(k + 1), floor * fx, fx, cfg.inner_cap, x_metric);
  BlockSolution xs = problem.minimize_x(state, sigma, x_target);
  const auto ex = x_target.evaluate(xs.point, xs.certificate);

  const BlockTarget y_target(crit, cfg.nu.at(k + 1), floor * fy, fy, cfg.inner_cap, y_metric);
  BlockSolution ys = problem.minimize_y(state, xs.point, sigma, y_target);
  const auto ey = y_target.evaluate(ys.point, ys.certificate);

  StepResult out;
  InexactCertificate& cert = out.certificate;
  cert.xi_norm = ex.norm;
  cert.eta_norm = ey.norm;
  cert.dx_metric = relative ? ex.metric : x_metric(xs.point);
  cert.dy_metric = relative ? ey.metric : y_metric(ys.point);
  cert.xi_floor = ex.floor;
  cert.eta_floor = ey.floor;
  cert.scale = 1.0 + std::max(xs.point.norm(), ys.point.norm());
  cert.inner_x = xs.sweeps;
  cert.inner_y = ys.sweeps;

  if (!ex.accepted) throw InnerConvergenceError("x", cert, "inner cap reached");
  if (!ey.accepted) throw InnerConvergenceError("y", cert, "inner cap reached");
  const Verdict v = criterion_check(cert, cfg, k);
  if (!v.accepted) throw InnerConvergenceError("outer", cert, v.reason);

  out.h = problem.residual(xs.point, ys.point);
  out.h_norm = out.h.norm();
  out.state.z = state.z + (cfg.tau * sigma) * out.h;
  out.state.x = std::move(xs.point);
  out.state.y = std::move(ys.point);
  out.xi = std::move(xs.certificate);
  out.eta = std::move(ys.certificate);
  return out;
}

SolveResult solve(BlockProblem& problem, EngineConfig cfg, IterateState initial,
                  const Monitor& monitor, const Observer& observer) {
  require_valid(cfg);
  SolveResult result;
  result.state = std::move(initial);
  const bool watch = cfg.tau >= kGoldenRatio;
  Vector h_prev;
  if (watch) h_prev = problem.residual(result.state.x, result.state.y);
  double residual_sum = 0.0;

  for (int k = 0; k < cfg.k_max; ++k) {
    StepResult step;
    try {
      step = outer_iterate(problem, result.state, cfg, k);
    } catch (const InnerConvergenceError& e) {
      result.status = Status::inner_failure;
      result.message = e.what();
      return result;
    }
    TraceRecord rec;
    rec.k = k + 1;
    rec.h_norm = step.h_norm;
    rec.xi_norm = step.certificate.xi_norm;
    rec.eta_norm = step.certificate.eta_norm;
    rec.dx_metric = step.certificate.dx_metric;
    rec.dy_metric = step.certificate.dy_metric;
    rec.inner_x = step.certificate.inner_x;
    rec.inner_y = step.certificate.inner_y;
    rec.objective = problem.objective(step.state.x, step.state.y);
    rec.sigma = cfg.sigma;
    if (watch) {
      // Finite only when the a posteriori condition for large steps holds.
      residual_sum += cfg.sigma * h_prev.squaredNorm() +
                      problem.y_quadratic(step.state.y - result.state.y, cfg.sigma, {});
      h_prev = step.h;
    }
    rec.residual_sum = residual_sum;

    const IterationEvent ev{k, cfg.sigma, cfg.tau, result.state, step};
    if (observer) observer(ev);
    const Directive d = monitor ? monitor(ev, rec) : Directive{};
    result.trace.push_back(rec);
    result.state = std::move(step.state);
    if (d.sigma > 0.0) cfg.sigma = d.sigma;
    if (d.stop) {
      result.status = Status::converged;
      return result;
    }
  }
  result.status = Status::iteration_limit;
  return result;
}

}  // namespace padmm::admm
