#include <algorithm>
#include <cmath>
#include <random>

#include "padmm/errors.hpp"
#include "padmm/problems.hpp"

namespace padmm::problems {

namespace {

using linalg::ConstraintMap;
using linalg::SparseSym;

/// Random sparse symmetric row with 2..n+2 distinct upper-triangle entries.
SparseSym random_row(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> idx(0, n - 1);
  std::uniform_int_distribution<int> count(2, n + 2);
  std::normal_distribution<double> val(0.0, 1.0);
  SparseSym row;
  const int k = count(rng);
  for (int t = 0; t < k; ++t) {
    int i = idx(rng), j = idx(rng);
    if (i > j) std::swap(i, j);
    row.push_back({i, j, val(rng)});
  }
  return row;
}

PlantedInstance draw(std::mt19937_64& rng, int n, int m_e, int m_i) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> mag(0.2, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // X* = V V' with nonnegative V, some zero rows and random column supports;
  // entries vanish exactly where supports are disjoint.
  const int r = std::max(1, n / 3);
  const int zero_rows = std::max(1, n / 5);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  Matrix V = Matrix::Zero(n, r);
  for (int t = zero_rows; t < n; ++t) {
    const int i = order[t];
    bool any = false;
    for (int c = 0; c < r; ++c)
      if (unit(rng) < 0.5) V(i, c) = mag(rng), any = true;
    if (!any) V(i, std::uniform_int_distribution<int>(0, r - 1)(rng)) = mag(rng);
  }
  const SymMatrix X(V * V.transpose());

  // S* = N D N' on the numerical null space of X*, so rank X* + rank S* = n.
  const auto eig = linalg::sym_eig(X);
  const double top = std::max(eig.values.maxCoeff(), 1.0);
  Matrix S = Matrix::Zero(n, n);
  for (int c = 0; c < n; ++c) {
    if (eig.values(c) > 1e-10 * top) continue;
    const Vector u = eig.vectors.col(c);
    S += (0.5 + unit(rng)) * u * u.transpose();
  }
  const SymMatrix Sstar(S);

  // Z* supported on the exact zeros of X*.
  SymMatrix Z(n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i)
      if (X(i, j) == 0.0 && unit(rng) < 0.7) Z.set(i, j, mag(rng));

  PlantedInstance inst;
  DnnsdpProblem& p = inst.problem;
  p.n = n;
  p.M = SymMatrix(n);
  p.AE = ConstraintMap(n);
  for (int r_ = 0; r_ < m_e; ++r_) p.AE.add_row(random_row(rng, n));
  p.bE = p.AE.apply(X);
  p.AI = ConstraintMap(n);
  for (int r_ = 0; r_ < m_i; ++r_) p.AI.add_row(random_row(rng, n));

  Vector yE(m_e);
  for (int r_ = 0; r_ < m_e; ++r_) yE(r_) = gauss(rng);
  // Half of the inequalities active with positive multipliers, the rest slack.
  Vector yI = Vector::Zero(m_i);
  const Vector ai_x = p.AI.apply(X);
  p.bI = ai_x;
  for (int r_ = 0; r_ < m_i; ++r_) {
    if (r_ % 2 == 0)
      yI(r_) = mag(rng);
    else
      p.bI(r_) = ai_x(r_) - (0.1 + 0.9 * unit(rng));
  }

  SymMatrix C = Z + Sstar;
  p.AE.adjoint_accumulate(yE, C);
  if (m_i > 0) p.AI.adjoint_accumulate(yI, C);
  p.C = C;

  inst.solution.X = X;
  inst.solution.S = Sstar;
  inst.solution.Z = Z;
  inst.solution.yE = yE;
  inst.solution.yI = yI;
  inst.optimal_value = p.C.inner(X);
  return inst;
}

}  // namespace

double planted_kkt_violation(const PlantedInstance& inst) {
  const DnnsdpProblem& p = inst.problem;
  const DualIterate& s = inst.solution;
  double v = (p.AE.apply(s.X) - p.bE).cwiseAbs().maxCoeff();
  SymMatrix dual = s.Z + s.S - p.C;
  p.AE.adjoint_accumulate(s.yE, dual);
  if (p.m_i() > 0) p.AI.adjoint_accumulate(s.yI, dual);
  v = std::max(v, dual.dense().cwiseAbs().maxCoeff());
  v = std::max(v, std::abs(s.X.inner(s.S)));
  v = std::max(v, std::abs((s.X - p.M).inner(s.Z)));
  v = std::max(v, -std::min(0.0, linalg::sym_eig(s.X).values.minCoeff()));
  v = std::max(v, -std::min(0.0, linalg::sym_eig(s.S).values.minCoeff()));
  v = std::max(v, -std::min(0.0, (s.X - p.M).dense().minCoeff()));
  v = std::max(v, -std::min(0.0, s.Z.dense().minCoeff()));
  if (p.m_i() > 0) {
    const Vector slack = p.AI.apply(s.X) - p.bI;
    v = std::max(v, -std::min(0.0, slack.minCoeff()));
    v = std::max(v, -std::min(0.0, s.yI.minCoeff()));
    v = std::max(v, std::abs(slack.dot(s.yI)));
  }
  v = std::max(v, std::abs(dnnsdp::primal_objective(p, s) - dnnsdp::dual_objective(p, s)));
  return v;
}

DualIterate with_slack(const PlantedInstance& inst) {
  DualIterate it = inst.solution;
  it.zSlack = it.yI;
  it.xSlack = inst.problem.bI - inst.problem.AI.apply(it.X);
  return it;
}

PlantedInstance gen_planted(std::uint64_t seed, int n, int m_e, int m_i) {
  if (n < 2 || m_e < 1 || m_i < 0) throw InvalidInputError("planted sizes need n >= 2, m_E >= 1");
  if (m_e > n * (n + 1) / 2) throw InvalidInputError("m_E exceeds the dimension of S^n");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    PlantedInstance inst = draw(rng, n, m_e, m_i);
    try {
      inst.problem.validate();
    } catch (const SingularOperatorError&) {
      continue;
    }
    if (planted_kkt_violation(inst) <= 1e-12) return inst;
  }
  throw Error("planted generator failed to draw a valid instance in 10 attempts");
}

}  // namespace padmm::problems
