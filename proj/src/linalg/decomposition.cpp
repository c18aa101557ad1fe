#include "padmm/errors.hpp"
#include "padmm/linalg.hpp"

namespace padmm::linalg {

EigenDecomposition sym_eig(const SymMatrix& s) {
  if (!s.is_finite()) throw InvalidInputError("eigendecomposition of a non-finite matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.dense());
  if (solver.info() != Eigen::Success) throw InvalidInputError("eigendecomposition failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SymMatrix project_psd(const SymMatrix& s) {
  if (s.dim() == 0) return s;
  const EigenDecomposition e = sym_eig(s);
  const Eigen::Index n = e.values.size();
  Eigen::Index first = 0;
  while (first < n && e.values(first) <= 0.0) ++first;
  if (first == n) return SymMatrix(s.dim());
  if (first == 0) return s;
  // Only the positive part of the spectrum contributes.
  const Eigen::Index k = n - first;
  const Matrix v = e.vectors.rightCols(k);
  const Matrix scaled = v * e.values.tail(k).asDiagonal();
  return SymMatrix(Matrix(scaled * v.transpose()));
}

SymMatrix project_nonneg(const SymMatrix& s) {
  if (!s.is_finite()) throw InvalidInputError("projection of a non-finite matrix");
  return SymMatrix(Matrix(s.dense().cwiseMax(0.0)));
}

Vector project_nonneg_vec(const Vector& v) {
  if (!v.allFinite()) throw InvalidInputError("projection of a non-finite vector");
  return v.cwiseMax(0.0);
}

}  // namespace padmm::linalg
