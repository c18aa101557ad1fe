#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "padmm/errors.hpp"
#include "padmm/verify.hpp"

namespace padmm::verify {

namespace {

constexpr admm::QuadWeights kEnergyX{1.0, 1.0, 0.0};   // P_f + Sigma_f
constexpr admm::QuadWeights kHalfX{1.0, 0.5, 0.0};     // P_f + 1/2 Sigma_f
constexpr admm::QuadWeights kFullY{1.0, 1.0, 1.0};     // T_g
constexpr admm::QuadWeights kDeltaY{1.0, 0.75, 0.0};   // P_g + 3/4 Sigma_g

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TheoryRecorder::TheoryRecorder(const admm::BlockProblem& problem, admm::IterateState reference,
                               const admm::EngineConfig& cfg)
    : problem_(problem) {
  const bool exact = cfg.criterion == admm::Criterion::exact;
  mu_ = exact ? admm::ErrorSchedule::zero() : cfg.mu;
  nu_ = exact ? admm::ErrorSchedule::zero() : cfg.nu;
  trace_.reference = std::move(reference);
  trace_.descent_gamma = cfg.descent_gamma;
}

admm::Observer TheoryRecorder::observer() {
  return [this](const admm::IterationEvent& ev) { observe(ev); };
}

void TheoryRecorder::observe(const admm::IterationEvent& ev) {
  const admm::IterateState& ref = trace_.reference;
  const admm::IterateState& before = ev.before;
  const admm::IterateState& after = ev.step.state;
  const double sigma = ev.sigma;
  const admm::BlockProblem& p = problem_;

  TheoryRecord rec;
  rec.k = ev.k;
  rec.sigma = sigma;
  rec.tau = ev.tau;
  rec.mu_k = ev.k >= 1 ? mu_.at(ev.k) : 0.0;
  rec.nu_k = ev.k >= 1 ? nu_.at(ev.k) : 0.0;
  rec.mu_next = mu_.at(ev.k + 1);
  rec.nu_next = nu_.at(ev.k + 1);

  const Vector h_prev = p.residual(before.x, before.y);
  rec.h_prev = h_prev.squaredNorm();
  rec.h_next = ev.step.h.squaredNorm();

  const Vector xe_next = after.x - ref.x;
  const Vector ye_next = after.y - ref.y;
  rec.xe_prev = p.x_quadratic(before.x - ref.x, sigma, kEnergyX);
  rec.xe_next = p.x_quadratic(xe_next, sigma, kEnergyX);
  rec.ye_prev = p.y_quadratic(before.y - ref.y, sigma, kFullY);
  rec.ye_next = p.y_quadratic(ye_next, sigma, kFullY);
  rec.ze_prev = (before.z - ref.z).squaredNorm();
  rec.ze_next = (after.z - ref.z).squaredNorm();

  const Vector dy = after.y - before.y;
  const Vector dx = after.x - before.x;
  rec.dy_next = p.y_quadratic(dy, sigma, kDeltaY);
  rec.dz_next = (after.z - before.z).squaredNorm();
  rec.cross = h_prev.dot(p.apply_y_map(dy));
  rec.dx_half = p.x_quadratic(dx, sigma, kHalfX);
  rec.dy_t = p.y_quadratic(dy, sigma, kFullY);
  rec.x_floor = p.x_metric_floor(sigma);
  rec.y_floor = p.y_metric_floor(sigma);

  rec.r = 2.0 * xe_next.dot(ev.step.xi) + 2.0 * ye_next.dot(ev.step.eta);
  if (has_prev_) {
    rec.dy_prev = p.y_quadratic(before.y - prev_y_, sigma, kDeltaY);
    rec.dz_prev = (before.z - prev_z_).squaredNorm();
    rec.r += 2.0 * (ev.step.eta - prev_eta_).dot(dy);
    rec.complete = ev.k >= 1 && prev_sigma_ == sigma;
  }
  trace_.records.push_back(rec);

  has_prev_ = true;
  prev_sigma_ = sigma;
  prev_y_ = before.y;
  prev_z_ = before.z;
  prev_eta_ = ev.step.eta;
}

MarginReport check_lemma1(const TheoryTrace& trace, std::size_t i) {
  const TheoryRecord& r = trace.records.at(i);
  MarginReport m;
  m.k = r.k;
  if (!r.complete) return m;
  m.evaluated = true;
  const double ts = r.tau * r.sigma;
  const double h_term = (2.0 - r.tau) * r.sigma * r.h_next;
  const double cross_term = 2.0 * (1.0 - r.tau) * r.sigma * r.cross;
  m.lhs = h_term + (r.ze_next - r.ze_prev) / ts + (r.ye_next - r.ye_prev) +
          (r.xe_next - r.xe_prev) + (r.dy_next - r.dy_prev);
  m.rhs = cross_term + r.r - r.dx_half - r.dy_t;
  m.margin = m.rhs - m.lhs;
  m.scale = 1.0 + max_abs({h_term, r.ze_next / ts, r.ze_prev / ts, r.ye_next, r.ye_prev,
                           r.xe_next, r.xe_prev, r.dy_next, r.dy_prev, cross_term, r.r,
                           r.dx_half, r.dy_t});
  m.ok = m.margin >= -1e-8 * m.scale;
  return m;
}

DescentReport check_descent(const TheoryTrace& trace, std::size_t i) {
  const TheoryRecord& r = trace.records.at(i);
  DescentReport d;
  d.k = r.k;
  if (!r.complete) return d;
  d.evaluated = true;
  const double g = trace.descent_gamma;
  const double tau = r.tau;
  const double sigma = r.sigma;
  auto energy = [&](double mu, double nu, double xe, double ye, double ze, double dyv, double dz) {
    return (1.0 - mu / g) * xe + (1.0 - 2.0 * mu / g - nu / g) * ye + ze / (tau * sigma) + dyv +
           (2.0 - tau - 2.0 * mu / g) * dz / (tau * tau * sigma);
  };
  d.w_next = energy(r.mu_next, r.nu_next, r.xe_next, r.ye_next, r.ze_next, r.dy_next, r.dz_next);
  d.w_now = energy(r.mu_k, r.nu_k, r.xe_prev, r.ye_prev, r.ze_prev, r.dy_prev, r.dz_prev);
  d.growth = (1.0 + 4.0 * r.nu_k / (g * (2.0 - tau))) * (1.0 + 2.0 * (r.nu_k + r.nu_next) / g);
  const double m = std::min(tau, 1.0 + tau - tau * tau);
  const double coef = std::min(2.0 * m / 3.0, m);
  d.r_k = 1.5 * sigma / tau * r.h_prev + r.dy_t;
  // Reciprocal metric floors upper-bound the inverse operator norms.
  const double c = 2.0 * std::max(1.0 / r.x_floor, 1.0 / r.y_floor);
  d.bound = d.growth * d.w_now + c * g * (r.nu_k + r.nu_next + r.mu_next) - coef * d.r_k;
  d.slack = d.bound - d.w_next;
  d.scale = 1.0 + max_abs({d.w_next, d.w_now, d.r_k});
  d.ok = d.slack >= -1e-6 * d.scale;
  return d;
}

std::vector<DescentReport> check_descent(const TheoryTrace& trace) {
  std::vector<DescentReport> out;
  out.reserve(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) out.push_back(check_descent(trace, i));
  return out;
}

namespace {

template <class Report>
void tally(SequenceSummary& s, const Report& r, double value) {
  if (!r.evaluated) return;
  ++s.evaluated;
  s.worst = std::min(s.worst, value / r.scale);
  if (!r.ok) {
    if (s.first_violation_k < 0) s.first_violation_k = r.k;
    ++s.violations;
  }
}

}  // namespace

SequenceSummary summarize_lemma1(const TheoryTrace& trace) {
  SequenceSummary s;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const MarginReport m = check_lemma1(trace, i);
    tally(s, m, m.margin);
  }
  return s;
}

SequenceSummary summarize_descent(const TheoryTrace& trace) {
  SequenceSummary s;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const DescentReport d = check_descent(trace, i);
    tally(s, d, d.slack);
  }
  return s;
}

SummabilityReport check_summability(const admm::EngineConfig& cfg, long K) {
  admm::require_valid(cfg);
  const bool squared = cfg.criterion == admm::Criterion::c2_prime;
  SummabilityReport rep;
  const bool zero = cfg.mu.cap <= 0.0 && cfg.nu.cap <= 0.0;
  if (zero) return rep;
  // The series is dominated by sum k^-q <= q/(q-1) for q > 1.
  const double p = std::min(cfg.mu.cap > 0.0 ? cfg.mu.power : INFINITY,
                            cfg.nu.cap > 0.0 ? cfg.nu.power : INFINITY);
  const double q = squared ? 2.0 * p : p;
  rep.bound = q / (q - 1.0);
  double prev = 0.0;
  for (long k = 1; k <= K; ++k) {
    const int kk = static_cast<int>(std::min<long>(k, std::numeric_limits<int>::max()));
    double t = std::max(cfg.mu.at(kk), cfg.nu.at(kk));
    if (squared) t *= t;
    rep.partial_sum += t;
    if (rep.partial_sum < prev) rep.monotone = false;
    prev = rep.partial_sum;
  }
  rep.within = rep.partial_sum <= rep.bound;
  return rep;
}

void write_margin_csv(std::ostream& os, const TheoryTrace& trace) {
  os << "k,lemma1_margin,descent_slack,R_k\n";
  const auto old_precision = os.precision(17);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const MarginReport m = check_lemma1(trace, i);
    const DescentReport d = check_descent(trace, i);
    os << m.k << ',';
    if (m.evaluated) os << m.margin;
    os << ',';
    if (d.evaluated) os << d.slack;
    os << ',';
    if (d.evaluated) os << d.r_k;
    os << '\n';
  }
  os.precision(old_precision);
}

FaultOutcome run_fault_trial(admm::BlockProblem& solver, const admm::BlockProblem& metrics,
                             const admm::EngineConfig& cfg, const admm::IterateState& initial,
                             const admm::IterateState& reference, Fault fault, int iterations) {
  admm::require_valid(cfg);
  TheoryRecorder rec(metrics, reference, cfg);
  FaultOutcome out;
  admm::IterateState state = initial;
  for (int k = 0; k < iterations; ++k) {
    admm::StepResult step;
    try {
      step = admm::outer_iterate(solver, state, cfg, k);
    } catch (const Error&) {
      // An inner failure ends the trial without counting as a detection.
      out.iterations = k;
      return out;
    }
    const double step_size = cfg.tau * cfg.sigma;
    if (fault == Fault::multiplier_scale)
      step.state.z = 1.01 * (state.z + step_size * step.h);
    else if (fault == Fault::multiplier_sign)
      step.state.z = state.z - step_size * step.h;
    rec.observe({k, cfg.sigma, cfg.tau, state, step});
    const std::size_t i = rec.trace().records.size() - 1;
    const MarginReport m = check_lemma1(rec.trace(), i);
    const DescentReport d = check_descent(rec.trace(), i);
    if ((m.evaluated && !m.ok) || (d.evaluated && !d.ok)) {
      out.detected = true;
      out.first_violation_k = k;
      out.iterations = k + 1;
      return out;
    }
    state = std::move(step.state);
  }
  out.iterations = iterations;
  return out;
}

}  // namespace padmm::verify
