#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "padmm/admm.hpp"
#include "padmm/linalg.hpp"

namespace padmm::dnnsdp {

using linalg::ConstraintMap;
using linalg::Matrix;
using linalg::SymMatrix;
using linalg::Vector;

/// max -<C,X> s.t. A_E X = b_E, A_I X >= b_I, X psd, X - M entrywise nonnegative.
struct DnnsdpProblem {
  int n = 0;
  SymMatrix C;
  SymMatrix M;
  ConstraintMap AE;
  Vector bE;
  ConstraintMap AI;
  Vector bI;

  int m_e() const { return AE.rows(); }
  int m_i() const { return AI.rows(); }
  /// Throws InvalidInputError on inconsistent sizes or non-finite data and
  /// SingularOperatorError when A_E is not surjective.
  void validate() const;
};

/// Field-by-field bitwise equality.
bool identical(const DnnsdpProblem& a, const DnnsdpProblem& b);

enum class Variant {
  alg1,     ///< blocks (Z, y_E) and S; equality constraints only
  alg2,     ///< blocks (y_I, Z) and (y_E, S) with an indefinite-safe proximal term on y_I
  alg3,     ///< slack form: blocks (y_I, z, Z) and (y_E, S)
  admm3d,   ///< baseline, one Z -> y_E -> S pass
  padmm4d,  ///< baseline, one y_I -> Z -> y_E -> S pass with the full proximal term
  admm4d,   ///< baseline, one y_I -> (z, Z) -> y_E -> S pass
};

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);
bool is_baseline(Variant v);
/// Variants carrying the slack z and its multiplier x.
bool uses_slack(Variant v);

/// Dual variables and multipliers; the slack pair is empty unless the slack form is used.
struct DualIterate {
  Vector yI;
  Vector zSlack;
  SymMatrix Z;
  Vector yE;
  SymMatrix S;
  SymMatrix X;
  Vector xSlack;

  static DualIterate zeros(const DnnsdpProblem& p, bool slack);
};

struct ResidualReport {
  double eta_P = 0.0;
  double eta_D = 0.0;
  double eta_S = 0.0;
  double eta_K = 0.0;
  double eta_Sstar = 0.0;
  double eta_Kstar = 0.0;
  double eta_C1 = 0.0;
  double eta_C2 = 0.0;
  double eta_I = 0.0;
  double eta_Istar = 0.0;
  double eta = 0.0;
  bool inequalities = false;  ///< whether the last two components are populated
};

/// Relative KKT residuals; the inequality components are populated when m_I > 0,
/// and the slack equation joins the dual residual when the iterate carries a slack.
ResidualReport kkt_residuals(const DnnsdpProblem& p, const DualIterate& it);

/// Primal value <C,X> and dual value b_E'y_E + b_I'y_I + <M,Z>.
double primal_objective(const DnnsdpProblem& p, const DualIterate& it);
double dual_objective(const DnnsdpProblem& p, const DualIterate& it);

/// Lower bound on the smallest eigenvalue of the metric of a (matrix, A_E) block
/// with an eps proximal term on the matrix part.
double delta_bound(double sigma, double epsilon, double ae_lambda_min);
/// Lower bound factor for the (y_I, Z) block metric, min(rho, 1 - lambda_max/rho).
double theta_bound(double rho, double ai_lambda_max);

/// S = Pi_psd(C - A_E^* y_E - Z - X/sigma).
SymMatrix alg1_update_S(const DnnsdpProblem& p, const SymMatrix& Z, const Vector& yE,
                        const SymMatrix& X, double sigma);

/// X += tau sigma (A_I^* y_I + Z + A_E^* y_E + S - C) and x += tau sigma (y_I - z).
void alg3_update_multipliers(const DnnsdpProblem& p, DualIterate& it, double sigma, double tau);

/// Result of one block minimization on the dual iterate.
struct BlockOutcome {
  DualIterate iterate;
  Vector certificate;  ///< packed in the block's coordinates
  int sweeps = 0;
};

/// A DNNSDP algorithm seen as a two-block problem for the generic engine.
class Formulation : public admm::BlockProblem {
 public:
  Formulation(const DnnsdpProblem& p, double epsilon);

  virtual Variant variant() const = 0;
  virtual admm::IterateState pack(const DualIterate& it) const = 0;
  virtual DualIterate unpack(const admm::IterateState& s) const = 0;

  /// The x-block of the engine, run directly on a dual iterate.
  virtual BlockOutcome block_x(const DualIterate& it, double sigma,
                               const admm::BlockTarget& target) const = 0;
  /// The y-block; it holds the new x-block values and the previous y-block values.
  virtual BlockOutcome block_y(const DualIterate& it, double sigma,
                               const admm::BlockTarget& target) const = 0;

  admm::BlockSolution minimize_x(const admm::IterateState& s, double sigma,
                                 const admm::BlockTarget& target) override;
  admm::BlockSolution minimize_y(const admm::IterateState& s, const Vector& x_next, double sigma,
                                 const admm::BlockTarget& target) override;
  double objective(const Vector& x, const Vector& y) const override;
  double relaxed_floor(const admm::IterateState& s, double sigma) const override;

  /// Whether the relative criteria have a metric lower bound for this formulation.
  virtual bool supports_relative() const { return true; }

  const DnnsdpProblem& problem() const { return p_; }
  double epsilon() const { return eps_; }
  double ae_lambda_min() const { return ae_lambda_min_; }

 protected:
  /// Writes the x-block coordinates of it into a flat vector.
  virtual Vector pack_x(const DualIterate& it) const = 0;
  virtual Vector pack_y(const DualIterate& it) const = 0;
  Vector solve_ye(const Vector& rhs) const { return ae_factor_.solve(rhs); }
  /// A_I^* y_I + Z + A_E^* y_E + S - C.
  SymMatrix dual_residual(const DualIterate& it) const;

  const DnnsdpProblem& p_;
  double eps_;
  linalg::CholeskyFactor ae_factor_;
  double ae_lambda_min_;
  int n2_;
};

/// Builds the formulation of a variant; baselines use eps = 0 and full proximal terms.
std::unique_ptr<Formulation> make_formulation(const DnnsdpProblem& p, Variant v, double epsilon);

/// Penalty adaptation and restart rules.
struct AdaptationPolicy {
  bool enabled = true;
  int window = 20;
  double imbalance_threshold = 2.0;
  double scale_factor = 1.4;
  double sigma_min = 1e-4;
  double sigma_max = 1e4;
  int restart_window = 300;
  double restart_stall_fraction = 0.01;
  /// Raise sigma when the primal residuals dominate. The default lowers it instead:
  /// sigma penalizes dual infeasibility here, and the primal side is the multiplier.
  bool raise_on_primal = false;

  /// Throws InvalidInputError when bounds are unordered or factors are not above 1.
  void validate() const;
};

/// Primal-to-dual residual ratio of one report.
double imbalance_ratio(const ResidualReport& r);
/// Rebalances sigma from the geometric mean ratio over the window;
/// aggressive mode scales by the squared factor and acts on any imbalance.
double adapt_sigma(std::span<const ResidualReport> window, double sigma,
                   const AdaptationPolicy& policy, bool aggressive = false);
/// True iff eta fell by less than the stall fraction over the last restart window.
bool restart_check(std::span<const double> eta_history, const AdaptationPolicy& policy);

struct SolverConfig {
  admm::EngineConfig engine;
  double epsilon = 1e-5;
  AdaptationPolicy policy;
};

/// Defaults for a variant: tau 1.618, C1, eps 1e-5, k_max 20000 or 40000.
SolverConfig default_solver_config(Variant v);

struct IterationLog {
  admm::TraceRecord engine;
  ResidualReport residuals;
  bool restarted = false;
};

struct DnnsdpResult {
  DualIterate iterate;
  ResidualReport residuals;
  std::vector<IterationLog> trace;
  admm::Status status = admm::Status::iteration_limit;
  std::string message;
  int iterations = 0;
  int restarts = 0;
  long inner_x_total = 0;
  long inner_y_total = 0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double final_sigma = 0.0;
};

/// Runs a variant from the all-zero iterate until eta < eta_tol or k_max.
/// The observer, when given, sees every engine step together with the formulation.
DnnsdpResult solve_dnnsdp(const DnnsdpProblem& p, Variant v, const SolverConfig& cfg,
                          const std::function<void(const Formulation&, const admm::IterationEvent&)>&
                              observer = {});

}  // namespace padmm::dnnsdp
