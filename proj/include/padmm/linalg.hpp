#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace padmm::linalg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense real symmetric matrix with the Frobenius inner product.
/// Every constructor symmetrizes its input, so entry (i,j) always equals (j,i).
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(int n);
  /// Reinterprets a column-major n*n vector produced by flatten().
  static SymMatrix from_flat(const Vector& v, int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  /// Writes v at (i,j) and (j,i).
  void set(int i, int j, double v);
  /// Adds v at (i,j) and at (j,i) when off-diagonal.
  void add(int i, int j, double v);

  const Matrix& dense() const { return m_; }
  Vector flatten() const;

  double inner(const SymMatrix& other) const;
  double norm() const { return m_.norm(); }
  bool is_finite() const { return m_.allFinite(); }

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double s);

  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }
  friend SymMatrix operator-(SymMatrix a) { return a *= -1.0; }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

inline double inner(const SymMatrix& a, const SymMatrix& b) { return a.inner(b); }

/// One stored entry of a sparse symmetric matrix, 0-based, row <= col.
/// An off-diagonal entry stands for both mirrored positions.
struct SparseEntry {
  int row;
  int col;
  double value;
  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

using SparseSym = std::vector<SparseEntry>;

/// Linear map from S^n to R^m given by m sparse symmetric matrices.
class ConstraintMap {
 public:
  explicit ConstraintMap(int n = 0) : n_(n) {}
  ConstraintMap(int n, std::vector<SparseSym> rows);

  int dim() const { return n_; }
  int rows() const { return static_cast<int>(rows_.size()); }
  const SparseSym& row(int r) const { return rows_[r]; }

  /// Appends a row; entries are mirrored into the upper triangle and duplicates summed.
  void add_row(SparseSym entries);

  /// (apply X)_r = <A_r, X>.
  Vector apply(const SymMatrix& x) const;
  /// sum_r v_r A_r.
  SymMatrix adjoint(const Vector& v) const;
  /// Adds sum_r v_r A_r into out without allocating.
  void adjoint_accumulate(const Vector& v, SymMatrix& out) const;
  /// Gram matrix (A A*)_{rs} = <A_r, A_s>.
  Matrix gram() const;
  SymMatrix row_matrix(int r) const;

  friend bool operator==(const ConstraintMap& a, const ConstraintMap& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  int n_;
  std::vector<SparseSym> rows_;
};

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

EigenDecomposition sym_eig(const SymMatrix& s);

/// Projection onto the positive semidefinite cone.
SymMatrix project_psd(const SymMatrix& s);
/// Projection onto entrywise-nonnegative symmetric matrices.
SymMatrix project_nonneg(const SymMatrix& s);
Vector project_nonneg_vec(const Vector& v);

/// Cholesky factor of a symmetric positive definite matrix, reused across solves.
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  /// Throws SingularOperatorError naming the first non-positive pivot.
  explicit CholeskyFactor(const Matrix& g);

  int size() const { return static_cast<int>(lower_.rows()); }
  Vector solve(const Vector& rhs) const;
  const Matrix& lower() const { return lower_; }

 private:
  Matrix lower_;
};

Vector cholesky_solve(const Matrix& g, const Vector& rhs);

using LinearOperator = std::function<Vector(const Vector&)>;

struct CgResult {
  Vector x;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// Conjugate gradients until ||op(x) - rhs|| <= tol.
/// Throws ConvergenceFailure carrying the final residual when max_iterations is hit.
CgResult cg_solve(const LinearOperator& op, const Vector& rhs, double tol,
                  int max_iterations = 1000, const Vector* warm_start = nullptr);

/// Power-method estimate of the largest eigenvalue of a PSD operator on R^dim.
/// Stops when successive Rayleigh quotients agree to relative accuracy tol.
double lambda_max_estimate(const LinearOperator& op, int dim, double tol,
                           int max_iterations = 100000);

}  // namespace padmm::linalg
