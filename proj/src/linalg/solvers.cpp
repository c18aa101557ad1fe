#include <cmath>
#include <random>

#include "padmm/errors.hpp"
#include "padmm/linalg.hpp"

namespace padmm::linalg {

CholeskyFactor::CholeskyFactor(const Matrix& g) {
  if (g.rows() != g.cols()) throw InvalidInputError("Cholesky factor of a non-square matrix");
  if (!g.allFinite()) throw InvalidInputError("Cholesky factor of a non-finite matrix");
  const Eigen::Index n = g.rows();
  const double scale = n > 0 ? g.diagonal().cwiseAbs().maxCoeff() : 0.0;
  lower_ = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = g(j, j) - lower_.row(j).head(j).squaredNorm();
    // Pivots below roundoff relative to the diagonal mean numerical rank loss.
    if (!(d > 1e-14 * scale)) throw SingularOperatorError(static_cast<int>(j), d);
    const double root = std::sqrt(d);
    lower_(j, j) = root;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double s = g(i, j) - lower_.row(i).head(j).dot(lower_.row(j).head(j));
      lower_(i, j) = s / root;
    }
  }
}

Vector CholeskyFactor::solve(const Vector& rhs) const {
  if (rhs.size() != lower_.rows()) throw InvalidInputError("Cholesky solve with wrong length");
  const auto l = lower_.triangularView<Eigen::Lower>();
  Vector y = l.solve(rhs);
  return l.transpose().solve(y);
}

Vector cholesky_solve(const Matrix& g, const Vector& rhs) {
  return CholeskyFactor(g).solve(rhs);
}

CgResult cg_solve(const LinearOperator& op, const Vector& rhs, double tol, int max_iterations,
                  const Vector* warm_start) {
  if (!(tol > 0.0)) throw InvalidInputError("CG tolerance must be positive");
  CgResult out;
  out.x = warm_start ? *warm_start : Vector::Zero(rhs.size());
  Vector r = rhs - (warm_start ? op(out.x) : Vector::Zero(rhs.size()));
  double rr = r.squaredNorm();
  out.residual_norm = std::sqrt(rr);
  if (out.residual_norm <= tol) return out;
  Vector p = r;
  while (out.iterations < max_iterations) {
    const Vector ap = op(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) throw ConvergenceFailure("CG met a non-positive curvature direction",
                                               out.residual_norm);
    const double alpha = rr / pap;
    out.x += alpha * p;
    r -= alpha * ap;
    ++out.iterations;
    const double rr_next = r.squaredNorm();
    out.residual_norm = std::sqrt(rr_next);
    if (out.residual_norm <= tol) {
      // The recursive residual drifts; confirm against a direct evaluation.
      const Vector true_r = rhs - op(out.x);
      out.residual_norm = true_r.norm();
      if (out.residual_norm <= tol) return out;
      r = true_r;
      p = r;
      rr = r.squaredNorm();
      continue;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw ConvergenceFailure("CG iteration cap reached", out.residual_norm);
}

double lambda_max_estimate(const LinearOperator& op, int dim, double tol, int max_iterations) {
  if (dim == 0) return 0.0;
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = unif(rng);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = op(v);
    const double next = v.dot(w);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return next;
    lambda = next;
  }
  return lambda;
}

}  // namespace padmm::linalg
