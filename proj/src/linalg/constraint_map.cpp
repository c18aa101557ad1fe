#include <algorithm>
#include <cmath>

#include "padmm/errors.hpp"
#include "padmm/linalg.hpp"

namespace padmm::linalg {

ConstraintMap::ConstraintMap(int n, std::vector<SparseSym> rows) : n_(n) {
  for (auto& r : rows) add_row(std::move(r));
}

void ConstraintMap::add_row(SparseSym entries) {
  for (auto& e : entries) {
    if (e.row > e.col) std::swap(e.row, e.col);
    if (e.row < 0 || e.col >= n_)
      throw InvalidInputError("constraint entry index out of range");
    if (!std::isfinite(e.value)) throw InvalidInputError("constraint entry is not finite");
  }
  std::sort(entries.begin(), entries.end(), [](const SparseEntry& a, const SparseEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseSym merged;
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
      merged.back().value += e.value;
    else
      merged.push_back(e);
  }
  rows_.push_back(std::move(merged));
}

Vector ConstraintMap::apply(const SymMatrix& x) const {
  if (x.dim() != n_) throw InvalidInputError("constraint map applied to wrong dimension");
  const Matrix& d = x.dense();
  Vector out(rows());
  for (int r = 0; r < rows(); ++r) {
    double s = 0.0;
    for (const auto& e : rows_[r])
      s += (e.row == e.col ? 1.0 : 2.0) * e.value * d(e.row, e.col);
    out(r) = s;
  }
  return out;
}

SymMatrix ConstraintMap::adjoint(const Vector& v) const {
  SymMatrix out(n_);
  adjoint_accumulate(v, out);
  return out;
}

void ConstraintMap::adjoint_accumulate(const Vector& v, SymMatrix& out) const {
  if (v.size() != rows()) throw InvalidInputError("adjoint applied to wrong length");
  if (out.dim() != n_) throw InvalidInputError("adjoint target has wrong dimension");
  for (int r = 0; r < rows(); ++r) {
    if (v(r) == 0.0) continue;
    for (const auto& e : rows_[r]) out.add(e.row, e.col, v(r) * e.value);
  }
}

Matrix ConstraintMap::gram() const {
  const int m = rows();
  Matrix g = Matrix::Zero(m, m);
  std::vector<SymMatrix> dense;
  dense.reserve(m);
  for (int r = 0; r < m; ++r) dense.push_back(row_matrix(r));
  for (int r = 0; r < m; ++r) {
    for (int s = r; s < m; ++s) {
      double v = 0.0;
      for (const auto& e : rows_[s])
        v += (e.row == e.col ? 1.0 : 2.0) * e.value * dense[r](e.row, e.col);
      g(r, s) = v;
      g(s, r) = v;
    }
  }
  return g;
}

SymMatrix ConstraintMap::row_matrix(int r) const {
  SymMatrix out(n_);
  for (const auto& e : rows_[r]) out.add(e.row, e.col, e.value);
  return out;
}

}  // namespace padmm::linalg
