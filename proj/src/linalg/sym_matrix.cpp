#include "padmm/errors.hpp"
#include "padmm/linalg.hpp"

namespace padmm::linalg {

SymMatrix::SymMatrix(int n) : m_(Matrix::Zero(n, n)) {
  if (n < 0) throw InvalidInputError("matrix dimension must be nonnegative");
}

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidInputError("symmetric matrix must be square");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix s(n);
  s.m_.setIdentity();
  return s;
}

SymMatrix SymMatrix::from_flat(const Vector& v, int n) {
  if (v.size() != static_cast<Eigen::Index>(n) * n)
    throw InvalidInputError("flat vector length does not match n*n");
  return SymMatrix(Matrix(Eigen::Map<const Matrix>(v.data(), n, n)));
}

void SymMatrix::set(int i, int j, double v) {
  m_(i, j) = v;
  m_(j, i) = v;
}

void SymMatrix::add(int i, int j, double v) {
  m_(i, j) += v;
  if (i != j) m_(j, i) += v;
}

Vector SymMatrix::flatten() const {
  return Eigen::Map<const Vector>(m_.data(), m_.size());
}

double SymMatrix::inner(const SymMatrix& other) const {
  if (other.dim() != dim()) throw InvalidInputError("inner product of mismatched dimensions");
  return m_.cwiseProduct(other.m_).sum();
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim() != dim()) throw InvalidInputError("sum of mismatched dimensions");
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim() != dim()) throw InvalidInputError("difference of mismatched dimensions");
  m_ -= o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

}  // namespace padmm::linalg
