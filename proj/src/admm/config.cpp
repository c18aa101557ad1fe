#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "padmm/admm.hpp"

namespace padmm::admm {

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::c1: return "c1";
    case Criterion::c2: return "c2";
    case Criterion::c2_prime: return "c2prime";
    case Criterion::exact: return "exact";
    case Criterion::single_sweep: return "single";
  }
  return "?";
}

Criterion criterion_from_string(const std::string& name) {
  // Names are case-insensitive: C1 and c1 are the same criterion.
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (s == "c1") return Criterion::c1;
  if (s == "c2") return Criterion::c2;
  if (s == "c2prime" || s == "c2'") return Criterion::c2_prime;
  if (s == "exact") return Criterion::exact;
  if (s == "single") return Criterion::single_sweep;
  throw InvalidInputError("unknown criterion '" + name + "'");
}

double ErrorSchedule::at(int k) const {
  if (cap <= 0.0) return 0.0;
  if (k < 1) k = 1;
  return std::min(cap, std::pow(static_cast<double>(k), -power));
}

ErrorSchedule default_schedule(Criterion c, double tau, double gamma) {
  switch (c) {
    case Criterion::c1: return {0.1, 1.001};
    case Criterion::c2: return {std::min(0.1, (2.0 - tau) / 4.0), 1.001};
    case Criterion::c2_prime: {
      const double bound = std::min(1.0 / (8.0 * gamma), (2.0 - tau - 2.5 / gamma) / (3.0 * gamma));
      // Shrunk by a relative 1e-12 so that squaring cannot round above the bound.
      return {std::sqrt(std::max(0.0, bound)) * (1.0 - 1e-12), 1.001};
    }
    case Criterion::exact:
    case Criterion::single_sweep: return ErrorSchedule::zero();
  }
  return ErrorSchedule::zero();
}

double ErrorSchedule::peak() const { return std::max(0.0, std::min(cap, 1.0)); }

std::string to_string(ViolationCode c) {
  switch (c) {
    case ViolationCode::sigma_not_positive: return "sigma_not_positive";
    case ViolationCode::tau_not_positive: return "tau_not_positive";
    case ViolationCode::tau_not_below_two: return "tau_not_below_two";
    case ViolationCode::tau_needs_override: return "tau_needs_override";
    case ViolationCode::tau_above_c2_prime_limit: return "tau_above_c2_prime_limit";
    case ViolationCode::schedule_cap_too_large: return "schedule_cap_too_large";
    case ViolationCode::schedule_not_summable: return "schedule_not_summable";
    case ViolationCode::schedule_not_square_summable: return "schedule_not_square_summable";
    case ViolationCode::c1_error_bound: return "c1_error_bound";
    case ViolationCode::c2_error_bound: return "c2_error_bound";
    case ViolationCode::c2_prime_gamma_too_small: return "c2_prime_gamma_too_small";
    case ViolationCode::c2_prime_error_bound: return "c2_prime_error_bound";
    case ViolationCode::bad_iteration_limits: return "bad_iteration_limits";
    case ViolationCode::bad_tolerance: return "bad_tolerance";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::vector<Violation> validate_config(const EngineConfig& cfg) {
  std::vector<Violation> out;
  auto add = [&](ViolationCode c, const std::string& m) { out.push_back({c, m}); };

  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma))
    add(ViolationCode::sigma_not_positive, "penalty sigma must be positive, got " + fmt(cfg.sigma));
  const double tau = cfg.tau;
  const bool tau_ok = tau > 0.0 && tau < 2.0;
  if (!(tau > 0.0)) add(ViolationCode::tau_not_positive, "step tau must be positive");
  if (tau >= 2.0) add(ViolationCode::tau_not_below_two, "step tau must lie below 2, got " + fmt(tau));
  if (tau_ok && tau >= kGoldenRatio && !cfg.allow_large_tau)
    add(ViolationCode::tau_needs_override,
        "step tau in [golden ratio, 2) needs the residual summability override");
  if (tau_ok && cfg.criterion == Criterion::c2_prime && tau > 1.6 && !cfg.allow_large_tau)
    add(ViolationCode::tau_above_c2_prime_limit,
        "square-summable criterion requires tau <= 1.6, got " + fmt(tau));
  if (cfg.k_max < 0 || cfg.inner_cap < 1)
    add(ViolationCode::bad_iteration_limits, "k_max must be >= 0 and inner_cap >= 1");
  if (!(cfg.eta_tol > 0.0)) add(ViolationCode::bad_tolerance, "eta_tol must be positive");

  const bool scheduled = cfg.criterion == Criterion::c1 || cfg.criterion == Criterion::c2 ||
                         cfg.criterion == Criterion::c2_prime;
  if (!scheduled) return out;

  for (const auto* sch : {&cfg.mu, &cfg.nu}) {
    const char* name = sch == &cfg.mu ? "mu" : "nu";
    if (sch->cap < 0.0 || sch->cap > 0.1)
      add(ViolationCode::schedule_cap_too_large,
          std::string(name) + " cap must lie in [0, 0.1], got " + fmt(sch->cap));
    if (sch->cap <= 0.0) continue;
    if (cfg.criterion == Criterion::c2_prime) {
      if (!(sch->power > 0.5))
        add(ViolationCode::schedule_not_square_summable,
            std::string(name) + " power must exceed 1/2, got " + fmt(sch->power));
    } else if (!(sch->power > 1.0)) {
      add(ViolationCode::schedule_not_summable,
          std::string(name) + " power must exceed 1, got " + fmt(sch->power));
    }
  }

  const double peak = std::max(cfg.mu.peak(), cfg.nu.peak());
  if (!tau_ok) return out;
  switch (cfg.criterion) {
    case Criterion::c1: {
      const double bound = cfg.descent_gamma * std::min(1.0 / 6.0, (2.0 - tau) / 4.0);
      if (!(cfg.descent_gamma > 0.0) || peak > bound)
        add(ViolationCode::c1_error_bound,
            "absolute error peak " + fmt(peak) + " exceeds gamma*min(1/6,(2-tau)/4) = " +
                fmt(bound));
      break;
    }
    case Criterion::c2: {
      const double bound = std::min(0.1, (2.0 - tau) / 4.0);
      if (peak > bound)
        add(ViolationCode::c2_error_bound,
            "relative error peak " + fmt(peak) + " exceeds min(0.1,(2-tau)/4) = " + fmt(bound));
      break;
    }
    case Criterion::c2_prime: {
      const double g = cfg.gamma;
      if (!(g >= 360.0))
        add(ViolationCode::c2_prime_gamma_too_small, "gamma must be >= 360, got " + fmt(g));
      if (g > 0.0) {
        const double bound = std::min(1.0 / (8.0 * g), (2.0 - tau - 2.5 / g) / (3.0 * g));
        if (peak * peak > bound)
          add(ViolationCode::c2_prime_error_bound,
              "squared error peak " + fmt(peak * peak) + " exceeds " + fmt(bound));
      }
      break;
    }
    default: break;
  }
  return out;
}

namespace {

std::string join(const std::vector<Violation>& v) {
  std::string s = "invalid configuration:";
  for (const auto& x : v) s += " [" + to_string(x.code) + "] " + x.message + ";";
  return s;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> v)
    : Error(join(v)), violations_(std::move(v)) {}

void require_valid(const EngineConfig& cfg) {
  auto v = validate_config(cfg);
  if (!v.empty()) throw ValidationError(std::move(v));
}

Verdict criterion_check(const InexactCertificate& cert, const EngineConfig& cfg, int k) {
  const double mu = cfg.mu.at(k + 1);
  const double nu = cfg.nu.at(k + 1);
  switch (cfg.criterion) {
    case Criterion::c1: {
      // A zero schedule value degenerates to the exact test.
      const double bx = mu > 0.0 ? mu : 1e-12 * cert.scale;
      const double by = nu > 0.0 ? nu : 1e-12 * cert.scale;
      if (cert.xi_norm > bx) return {false, "x-certificate " + fmt(cert.xi_norm) + " > " + fmt(bx)};
      if (cert.eta_norm > by)
        return {false, "y-certificate " + fmt(cert.eta_norm) + " > " + fmt(by)};
      return {};
    }
    case Criterion::c2:
    case Criterion::c2_prime: {
      const double bx = std::max(mu * cert.dx_metric, cert.xi_floor);
      const double by = std::max(nu * cert.dy_metric, cert.eta_floor);
      if (cert.xi_norm > bx) return {false, "x-certificate " + fmt(cert.xi_norm) + " > " + fmt(bx)};
      if (cert.eta_norm > by)
        return {false, "y-certificate " + fmt(cert.eta_norm) + " > " + fmt(by)};
      return {};
    }
    case Criterion::exact: {
      const double b = 1e-12 * cert.scale;
      if (cert.xi_norm > b || cert.eta_norm > b) return {false, "certificate above roundoff level"};
      return {};
    }
    case Criterion::single_sweep: return {};
  }
  return {};
}

}  // namespace padmm::admm
