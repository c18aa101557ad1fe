#include <algorithm>
#include <cmath>

#include "padmm/dnnsdp.hpp"
#include "padmm/errors.hpp"

namespace padmm::dnnsdp {

void AdaptationPolicy::validate() const {
  if (window < 1 || restart_window < 1) throw InvalidInputError("adaptation windows must be >= 1");
  if (!(imbalance_threshold > 1.0) || !(scale_factor > 1.0))
    throw InvalidInputError("imbalance threshold and scale factor must exceed 1");
  if (!(sigma_min > 0.0) || !(sigma_min <= sigma_max))
    throw InvalidInputError("penalty bounds must satisfy 0 < sigma_min <= sigma_max");
  if (!(restart_stall_fraction > 0.0 && restart_stall_fraction < 1.0))
    throw InvalidInputError("restart stall fraction must lie in (0,1)");
}

double imbalance_ratio(const ResidualReport& r) {
  const double primal = std::max({r.eta_P, r.eta_S, r.eta_K, r.eta_I});
  const double dual = std::max({r.eta_D, r.eta_Sstar, r.eta_Kstar, r.eta_Istar, 1e-16});
  return primal / dual;
}

double adapt_sigma(std::span<const ResidualReport> window, double sigma,
                   const AdaptationPolicy& policy, bool aggressive) {
  if (window.empty()) return sigma;
  double log_sum = 0.0;
  for (const auto& r : window) log_sum += std::log(std::max(imbalance_ratio(r), 1e-300));
  const double ratio = std::exp(log_sum / static_cast<double>(window.size()));
  const double factor = aggressive ? policy.scale_factor * policy.scale_factor : policy.scale_factor;
  // Aggressive mode acts on any imbalance, not only one outside the threshold band.
  const double upper = aggressive ? 1.0 : policy.imbalance_threshold;
  const double lower = aggressive ? 1.0 : 1.0 / policy.imbalance_threshold;
  const double up = std::min(sigma * factor, policy.sigma_max);
  const double down = std::max(sigma / factor, policy.sigma_min);
  if (ratio > upper) return policy.raise_on_primal ? up : down;
  if (ratio < lower) return policy.raise_on_primal ? down : up;
  return sigma;
}

bool restart_check(std::span<const double> eta_history, const AdaptationPolicy& policy) {
  const auto w = static_cast<std::size_t>(policy.restart_window);
  if (eta_history.size() <= w) return false;
  const double now = eta_history.back();
  const double then = eta_history[eta_history.size() - 1 - w];
  return now > (1.0 - policy.restart_stall_fraction) * then;
}

}  // namespace padmm::dnnsdp
