#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "padmm/errors.hpp"

namespace padmm::admm {

using Vector = Eigen::VectorXd;

/// Golden ratio, the open upper limit on the step size without an override.
inline constexpr double kGoldenRatio = 1.6180339887498949;

enum class Criterion {
  c1,            ///< absolute: ||xi|| <= mu_{k+1}
  c2,            ///< relative: ||xi||_F <= mu_{k+1} ||dx||_T
  c2_prime,      ///< relative with a square-summable schedule
  exact,         ///< certificates at roundoff level
  single_sweep,  ///< baselines: one pass, no acceptance test, no guarantee
};

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

/// mu_k = min(cap, k^-power) for k >= 1.
struct ErrorSchedule {
  double cap = 0.1;
  double power = 1.001;

  static ErrorSchedule zero() { return {0.0, 2.0}; }
  double at(int k) const;
  /// Largest value over k >= 1.
  double peak() const;
};

/// Largest admissible schedule of the form min(cap, k^-1.001) for a criterion and step size;
/// zero for the exact and single-sweep modes.
ErrorSchedule default_schedule(Criterion c, double tau, double gamma = 360.0);

struct EngineConfig {
  double sigma = 1.0;
  double tau = 1.618;
  Criterion criterion = Criterion::c1;
  ErrorSchedule mu;
  ErrorSchedule nu;
  double gamma = 360.0;        ///< constant of the square-summable criterion
  double descent_gamma = 2.0;  ///< constant bounding the absolute schedule against tau
  bool allow_large_tau = false;
  bool strict_c2 = false;      ///< disable the residual-based relaxation of C2
  double eta_tol = 1e-6;
  int k_max = 20000;
  int inner_cap = 100;
};

enum class ViolationCode {
  sigma_not_positive,
  tau_not_positive,
  tau_not_below_two,
  tau_needs_override,
  tau_above_c2_prime_limit,
  schedule_cap_too_large,
  schedule_not_summable,
  schedule_not_square_summable,
  c1_error_bound,
  c2_error_bound,
  c2_prime_gamma_too_small,
  c2_prime_error_bound,
  bad_iteration_limits,
  bad_tolerance,
};

std::string to_string(ViolationCode c);

struct Violation {
  ViolationCode code;
  std::string message;
};

/// Every breached parameter condition; empty when the configuration is admissible.
std::vector<Violation> validate_config(const EngineConfig& cfg);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Throws ValidationError listing every violation.
void require_valid(const EngineConfig& cfg);

struct IterateState {
  Vector x;
  Vector y;
  Vector z;
};

/// Norms compared by the inexactness criteria for one outer iteration.
/// For the relative criteria xi_norm and eta_norm are measured in the scaled norms.
struct InexactCertificate {
  double xi_norm = 0.0;
  double eta_norm = 0.0;
  double dx_metric = 0.0;
  double dy_metric = 0.0;
  double xi_floor = 0.0;   ///< relaxation floor of C2, same units as xi_norm
  double eta_floor = 0.0;
  double scale = 1.0;      ///< exact-mode scale, 1 + max(||x||, ||y||)
  int inner_x = 0;
  int inner_y = 0;
};

struct Verdict {
  bool accepted = true;
  std::string reason;
};

Verdict criterion_check(const InexactCertificate& cert, const EngineConfig& cfg, int k);

/// Acceptance test handed to a block minimizer for one outer iteration.
class BlockTarget {
 public:
  /// Returns ||candidate - anchor|| in the block's metric.
  using StepMetric = std::function<double(const Vector&)>;

  struct Evaluation {
    bool accepted = false;
    double norm = 0.0;    ///< certificate norm in criterion units
    double metric = 0.0;  ///< step metric (relative criteria only)
    double floor = 0.0;
  };

  BlockTarget(Criterion criterion, double tolerance, double floor, double norm_scale,
              int inner_cap, StepMetric metric);

  Evaluation evaluate(const Vector& candidate, const Vector& certificate) const;
  bool accepts(const Vector& candidate, const Vector& certificate) const {
    return evaluate(candidate, certificate).accepted;
  }

  Criterion criterion() const { return criterion_; }
  /// mu_{k+1} or nu_{k+1}.
  double tolerance() const { return tolerance_; }
  int inner_cap() const { return inner_cap_; }

 private:
  Criterion criterion_;
  double tolerance_;
  double floor_;
  double norm_scale_;
  int inner_cap_;
  StepMetric metric_;
};

/// Weights of ||v||^2 under prox*P + strong*Sigma + coupling*sigma*A A^*.
struct QuadWeights {
  double prox = 1.0;
  double strong = 1.0;
  double coupling = 1.0;
};

struct BlockSolution {
  Vector point;
  Vector certificate;
  int sweeps = 1;
};

/// Two-block program min f(x) + g(y) s.t. A^* x + B^* y = c with proximal terms,
/// exposed through inexact block minimizers and metric evaluators.
class BlockProblem {
 public:
  virtual ~BlockProblem() = default;

  /// Approximately minimizes the x-subproblem until target accepts.
  virtual BlockSolution minimize_x(const IterateState& s, double sigma,
                                   const BlockTarget& target) = 0;
  /// Approximately minimizes the y-subproblem at the new x.
  virtual BlockSolution minimize_y(const IterateState& s, const Vector& x_next, double sigma,
                                   const BlockTarget& target) = 0;

  /// h(x, y) = A^* x + B^* y - c.
  virtual Vector residual(const Vector& x, const Vector& y) const = 0;
  /// B^* y.
  virtual Vector apply_y_map(const Vector& y) const = 0;

  virtual double x_quadratic(const Vector& v, double sigma, QuadWeights w) const = 0;
  virtual double y_quadratic(const Vector& v, double sigma, QuadWeights w) const = 0;
  /// Lower bounds on the smallest eigenvalue of T_f and T_g.
  virtual double x_metric_floor(double sigma) const = 0;
  virtual double y_metric_floor(double sigma) const = 0;

  virtual double objective(const Vector& x, const Vector& y) const = 0;
  /// Floor of the relaxed relative criterion at the current iterate, in plain norm units.
  virtual double relaxed_floor(const IterateState&, double) const { return 0.0; }
};

class InnerConvergenceError : public Error {
 public:
  InnerConvergenceError(const std::string& block, const InexactCertificate& cert,
                        const std::string& why);
  const InexactCertificate& certificate() const { return cert_; }

 private:
  InexactCertificate cert_;
};

struct StepResult {
  IterateState state;
  InexactCertificate certificate;
  double h_norm = 0.0;
  Vector h;    ///< h(x^{k+1}, y^{k+1})
  Vector xi;   ///< certificate of the x-block
  Vector eta;  ///< certificate of the y-block
};

/// One outer iteration producing iterate k+1 from iterate k.
StepResult outer_iterate(BlockProblem& problem, const IterateState& state,
                         const EngineConfig& cfg, int k);

struct TraceRecord {
  int k = 0;  ///< index of the produced iterate
  double h_norm = 0.0;
  double xi_norm = 0.0;
  double eta_norm = 0.0;
  double dx_metric = 0.0;
  double dy_metric = 0.0;
  int inner_x = 0;
  int inner_y = 0;
  double objective = 0.0;
  double sigma = 0.0;
  double residual_sum = 0.0;  ///< running sum watched when tau exceeds the golden ratio
};

enum class Status { converged, iteration_limit, inner_failure };
std::string to_string(Status s);

struct SolveResult {
  IterateState state;
  std::vector<TraceRecord> trace;
  Status status = Status::iteration_limit;
  std::string message;
};

struct IterationEvent {
  int k;  ///< index of the iterate the step started from
  double sigma;
  double tau;
  const IterateState& before;
  const StepResult& step;
};

/// Caller's decision after each iteration; sigma <= 0 keeps the penalty.
struct Directive {
  bool stop = false;
  double sigma = 0.0;
};

using Monitor = std::function<Directive(const IterationEvent&, const TraceRecord&)>;
using Observer = std::function<void(const IterationEvent&)>;

/// Iterates until the monitor stops or k_max steps were taken.
SolveResult solve(BlockProblem& problem, EngineConfig cfg, IterateState initial,
                  const Monitor& monitor, const Observer& observer = {});

}  // namespace padmm::admm
