#include <algorithm>
#include <random>
#include <utility>

#include "padmm/errors.hpp"
#include "padmm/problems.hpp"

namespace padmm::problems {

namespace {

using linalg::ConstraintMap;
using linalg::SparseSym;

/// Pairs i < j receiving the three pair inequalities.
std::vector<std::pair<int, int>> pair_subset(int q, std::uint64_t seed) {
  std::vector<std::pair<int, int>> all;
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) all.emplace_back(i, j);
  if (q <= 12) return all;
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(3 * q));
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

BiqInstance gen_biq(std::uint64_t seed, int q, bool extended) {
  if (q < 1) throw InvalidInputError("BIQ dimension must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BiqInstance b;
  b.q = q;
  b.extended = extended;
  b.Q = Matrix::Zero(q, q);
  for (int j = 0; j < q; ++j)
    for (int i = 0; i <= j; ++i) b.Q(i, j) = b.Q(j, i) = u(rng);
  return b;
}

DnnsdpProblem biq_to_dnnsdp(const Matrix& Q, bool extended, std::uint64_t pair_seed) {
  const int q = static_cast<int>(Q.rows());
  if (q < 1 || Q.cols() != q) throw InvalidInputError("BIQ cost must be square and nonempty");
  if (!Q.allFinite() || (Q - Q.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw InvalidInputError("BIQ cost must be finite and symmetric");
  const int n = q + 1;
  const int last = q;
  DnnsdpProblem p;
  p.n = n;
  Matrix c = Matrix::Zero(n, n);
  c.topLeftCorner(q, q) = Q;
  p.C = SymMatrix(c);
  p.M = SymMatrix(n);

  // <A, Y> counts an off-diagonal entry twice, hence the 0.5 weights.
  p.AE = ConstraintMap(n);
  for (int i = 0; i < q; ++i) p.AE.add_row({{i, i, 1.0}, {i, last, -0.5}});
  p.AE.add_row({{last, last, 1.0}});
  p.bE = Vector::Zero(q + 1);
  p.bE(q) = 1.0;

  p.AI = ConstraintMap(n);
  std::vector<double> rhs;
  if (extended) {
    for (const auto& [i, j] : pair_subset(q, pair_seed)) {
      p.AI.add_row({{i, last, 0.5}, {i, j, -0.5}});  // Y_i,last - Y_ij >= 0
      rhs.push_back(0.0);
      p.AI.add_row({{j, last, 0.5}, {i, j, -0.5}});  // Y_j,last - Y_ij >= 0
      rhs.push_back(0.0);
      p.AI.add_row({{i, j, 0.5}, {i, last, -0.5}, {j, last, -0.5}});  // Y_ij - Y_i,last - Y_j,last >= -1
      rhs.push_back(-1.0);
    }
  }
  p.bI = Eigen::Map<const Vector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return p;
}

SymMatrix biq_lifting(const std::vector<int>& x) {
  const int q = static_cast<int>(x.size());
  Vector v(q + 1);
  for (int i = 0; i < q; ++i) v(i) = x[static_cast<std::size_t>(i)];
  v(q) = 1.0;
  return SymMatrix(Matrix(v * v.transpose()));
}

BiqOptimum brute_force_biq(const Matrix& Q) {
  const int q = static_cast<int>(Q.rows());
  if (q < 1 || Q.cols() != q) throw InvalidInputError("BIQ cost must be square and nonempty");
  if (q > 22) throw InvalidInputError("brute force limited to q <= 22");
  // Gray-code walk: flipping bit i by d changes x'Qx by 2 d (Qx)_i + Q_ii.
  Vector qx = Vector::Zero(q);
  std::vector<int> x(static_cast<std::size_t>(q), 0);
  double value = 0.0;
  BiqOptimum best{0.0, x};
  const std::uint64_t total = std::uint64_t{1} << q;
  for (std::uint64_t t = 1; t < total; ++t) {
    int i = 0;
    while (((t >> i) & 1u) == 0) ++i;
    const double d = x[static_cast<std::size_t>(i)] ? -1.0 : 1.0;
    value += 2.0 * d * qx(i) + Q(i, i);
    qx += d * Q.col(i);
    x[static_cast<std::size_t>(i)] ^= 1;
    if (value < best.value) best = {value, x};
  }
  // Recompute the winner directly to drop accumulated rounding.
  Vector xv(q);
  for (int i = 0; i < q; ++i) xv(i) = best.x[static_cast<std::size_t>(i)];
  best.value = xv.dot(Q * xv);
  return best;
}

}  // namespace padmm::problems
