#pragma once

#include <iosfwd>
#include <vector>

#include "padmm/admm.hpp"

namespace padmm::verify {

using admm::Vector;

/// Scalars of one transition k -> k+1 measured against a known KKT point.
/// Squared metric norms: xe in P_f + Sigma_f, ye in T_g, dy in P_g + 3/4 Sigma_g.
struct TheoryRecord {
  int k = 0;
  bool complete = false;  ///< previous step known and sigma unchanged across it
  double sigma = 0.0;
  double tau = 0.0;
  double mu_k = 0.0, mu_next = 0.0, nu_k = 0.0, nu_next = 0.0;
  double h_prev = 0.0, h_next = 0.0;    ///< ||h||^2 at k and k+1
  double xe_prev = 0.0, xe_next = 0.0;
  double ye_prev = 0.0, ye_next = 0.0;
  double ze_prev = 0.0, ze_next = 0.0;  ///< plain ||z_e||^2
  double dy_prev = 0.0, dy_next = 0.0;
  double dz_prev = 0.0, dz_next = 0.0;  ///< plain ||dz||^2
  double cross = 0.0;    ///< <h^k, B^* dy^{k+1}>
  double r = 0.0;        ///< certificate term 2<x_e,xi> + 2<y_e,eta> + 2<deta,dy>
  double dx_half = 0.0;  ///< ||dx^{k+1}||^2 in P_f + 1/2 Sigma_f
  double dy_t = 0.0;     ///< ||dy^{k+1}||^2 in T_g
  double x_floor = 0.0, y_floor = 0.0;
};

struct TheoryTrace {
  admm::IterateState reference;
  double descent_gamma = 2.0;
  std::vector<TheoryRecord> records;
};

/// Engine observer accumulating theory records; the problem must outlive it.
class TheoryRecorder {
 public:
  TheoryRecorder(const admm::BlockProblem& problem, admm::IterateState reference,
                 const admm::EngineConfig& cfg);

  void observe(const admm::IterationEvent& ev);
  /// Observer forwarding to this recorder.
  admm::Observer observer();
  const TheoryTrace& trace() const { return trace_; }

 private:
  const admm::BlockProblem& problem_;
  admm::ErrorSchedule mu_, nu_;
  TheoryTrace trace_;
  bool has_prev_ = false;
  double prev_sigma_ = 0.0;
  Vector prev_y_, prev_z_, prev_eta_;
};

struct MarginReport {
  int k = 0;
  bool evaluated = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  ///< rhs - lhs
  double scale = 1.0;
  bool ok = true;       ///< margin >= -1e-8 scale
};

/// Both sides of the one-step inequality for record index i; skipped when incomplete.
MarginReport check_lemma1(const TheoryTrace& trace, std::size_t i);

struct DescentReport {
  int k = 0;
  bool evaluated = false;
  double w_next = 0.0;  ///< weighted energy at k+1
  double w_now = 0.0;   ///< weighted energy at k
  double growth = 1.0;  ///< factor on the energy at k
  double r_k = 0.0;     ///< 3 sigma/(2 tau) ||h^k||^2 + ||dy^{k+1}||^2_{T_g}
  double bound = 0.0;
  double slack = 0.0;   ///< bound - w_next
  double scale = 1.0;
  bool ok = true;       ///< slack >= -1e-6 scale
};

/// Weighted-energy recursion of the absolute criterion for record index i.
DescentReport check_descent(const TheoryTrace& trace, std::size_t i);
std::vector<DescentReport> check_descent(const TheoryTrace& trace);

struct SequenceSummary {
  int evaluated = 0;
  int violations = 0;
  int first_violation_k = -1;
  double worst = 0.0;  ///< most negative margin or slack divided by its scale
};

SequenceSummary summarize_lemma1(const TheoryTrace& trace);
SequenceSummary summarize_descent(const TheoryTrace& trace);

struct SummabilityReport {
  double partial_sum = 0.0;  ///< sum of max(mu_k, nu_k), squared for C2'
  double bound = 0.0;        ///< closed-form bound of the full series
  bool monotone = true;      ///< partial sums never decrease
  bool within = true;        ///< partial_sum <= bound
};

/// Partial sums up to K against the zeta-type bound p/(p-1), with exponent 2p for C2'.
SummabilityReport check_summability(const admm::EngineConfig& cfg, long K);

/// Per-record CSV: k, lemma1_margin, descent_slack, R_k; skipped rows are left blank.
void write_margin_csv(std::ostream& os, const TheoryTrace& trace);

enum class Fault {
  none,
  multiplier_scale,  ///< updated multiplier off by 1% of its value
  multiplier_sign,   ///< multiplier step with the wrong sign
  dropped_proximal,  ///< solver omits a proximal term the metrics include
};

struct FaultOutcome {
  bool detected = false;
  int first_violation_k = -1;
  int iterations = 0;
};

/// Runs `iterations` steps of the engine on `solver` with the fault applied, recording
/// theory scalars with `metrics` (the unfaulted problem), and reports the first violation.
/// For dropped_proximal the caller passes a solver built without the proximal term.
FaultOutcome run_fault_trial(admm::BlockProblem& solver, const admm::BlockProblem& metrics,
                             const admm::EngineConfig& cfg, const admm::IterateState& initial,
                             const admm::IterateState& reference, Fault fault, int iterations);

}  // namespace padmm::verify
