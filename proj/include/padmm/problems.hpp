#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "padmm/admm.hpp"
#include "padmm/dnnsdp.hpp"

namespace padmm::problems {

using dnnsdp::DnnsdpProblem;
using dnnsdp::DualIterate;
using linalg::Matrix;
using linalg::SymMatrix;
using linalg::Vector;

/// A problem together with a primal-dual solution known by construction.
struct PlantedInstance {
  DnnsdpProblem problem;
  DualIterate solution;  ///< X*, y_I*, Z*, y_E*, S*; slack fields empty
  double optimal_value = 0.0;  ///< <C, X*>
};

/// Seeded planted instance: X* psd and nonnegative with zero rows and a sparse
/// entry pattern, S* and Z* strictly complementary to it, random sparse rows.
/// Throws Error after 10 failed draws.
PlantedInstance gen_planted(std::uint64_t seed, int n, int m_e, int m_i);

/// Largest violation of the KKT system at the planted solution (absolute units).
double planted_kkt_violation(const PlantedInstance& inst);

/// The planted solution extended with the slack pair of the slack formulation.
DualIterate with_slack(const PlantedInstance& inst);

struct BiqInstance {
  int q = 0;
  Matrix Q;
  bool extended = false;
};

/// Symmetric Q with entries uniform in [-1, 1].
BiqInstance gen_biq(std::uint64_t seed, int q, bool extended);

/// DNN lifting of min x'Qx over x in {0,1}^q with Y = [X x; x' 1].
/// Extended mode adds the three pair inequalities for all pairs when q <= 12,
/// otherwise for 3q pairs drawn with pair_seed.
DnnsdpProblem biq_to_dnnsdp(const Matrix& Q, bool extended, std::uint64_t pair_seed = 0);

/// Lifted matrix [x x'  x; x' 1] of a binary vector.
SymMatrix biq_lifting(const std::vector<int>& x);

struct BiqOptimum {
  double value = 0.0;
  std::vector<int> x;
};

/// Exhaustive minimum of x'Qx over binary x, q <= 22; ties keep the first in Gray order.
BiqOptimum brute_force_biq(const Matrix& Q);

/// Line-based text format; values use the shortest round-trip decimal form.
void write_problem(std::ostream& os, const DnnsdpProblem& p);
void write_problem(const std::string& path, const DnnsdpProblem& p);
/// Throws ParseError with the offending line number.
DnnsdpProblem read_problem(std::istream& is);
DnnsdpProblem read_problem(const std::string& path);

/// Companion file holding the planted solution and its value.
void write_reference(std::ostream& os, const PlantedInstance& inst);
void write_reference(const std::string& path, const PlantedInstance& inst);
/// Reads a reference for the given problem.
PlantedInstance read_reference(std::istream& is, const DnnsdpProblem& p);
PlantedInstance read_reference(const std::string& path, const DnnsdpProblem& p);

/// min ||x-a||^2 + ||y-b||^2 s.t. x + y = c, with proximal weights pf, pg
/// (possibly negative) and an optional deliberate use of the error budget.
class QuadraticToy final : public admm::BlockProblem {
 public:
  /// spend in [0,1): fraction of the absolute tolerance each inexact block spends.
  QuadraticToy(Vector a, Vector b, Vector c, double pf = 0.0, double pg = 0.0,
               double spend = 0.0);

  admm::BlockSolution minimize_x(const admm::IterateState& s, double sigma,
                                 const admm::BlockTarget& target) override;
  admm::BlockSolution minimize_y(const admm::IterateState& s, const Vector& x_next, double sigma,
                                 const admm::BlockTarget& target) override;
  Vector residual(const Vector& x, const Vector& y) const override { return x + y - c_; }
  Vector apply_y_map(const Vector& y) const override { return y; }
  double x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const override;
  double y_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const override;
  double x_metric_floor(double sigma) const override { return pf_ + 2.0 + sigma; }
  double y_metric_floor(double sigma) const override { return pg_ + 2.0 + sigma; }
  double objective(const Vector& x, const Vector& y) const override;

  /// Closed-form KKT point: x* = a - l, y* = b - l, z* = 2 l with l = (a+b-c)/2.
  admm::IterateState solution() const;
  admm::IterateState start() const;

 private:
  Vector a_, b_, c_;
  double pf_, pg_, spend_;
};

}  // namespace padmm::problems
