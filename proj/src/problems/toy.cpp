#include "padmm/errors.hpp"
#include "padmm/problems.hpp"

namespace padmm::problems {

namespace {

/// Unit vector pointing from the exact minimizer back to the anchor, or e_1.
Vector spend_direction(const Vector& anchor, const Vector& exact) {
  Vector d = anchor - exact;
  const double n = d.norm();
  if (n > 0.0) return d / n;
  Vector e = Vector::Zero(exact.size());
  if (e.size() > 0) e(0) = 1.0;
  return e;
}

}  // namespace

QuadraticToy::QuadraticToy(Vector a, Vector b, Vector c, double pf, double pg, double spend)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), pf_(pf), pg_(pg), spend_(spend) {
  if (a_.size() != b_.size() || a_.size() != c_.size() || a_.size() == 0)
    throw InvalidInputError("toy vectors must share a positive dimension");
  // f and g have Sigma = 2I; the proximal terms may be indefinite within these limits.
  if (!(pf_ >= -1.0) || !(pg_ >= -0.75))
    throw InvalidInputError("toy proximal weights need pf >= -1 and pg >= -0.75");
  if (!(spend_ >= 0.0 && spend_ < 1.0)) throw InvalidInputError("toy spend must lie in [0,1)");
}

admm::BlockSolution QuadraticToy::minimize_x(const admm::IterateState& s, double sigma,
                                             const admm::BlockTarget& target) {
  const double lip = 2.0 + sigma + pf_;
  const Vector exact = (2.0 * a_ - s.z - sigma * (s.y - c_) + pf_ * s.x) / lip;
  auto gradient = [&](const Vector& x) -> Vector {
    return 2.0 * (x - a_) + s.z + sigma * (x + s.y - c_) + pf_ * (x - s.x);
  };
  if (spend_ > 0.0 && target.criterion() == admm::Criterion::c1) {
    const Vector cand = exact + (spend_ * target.tolerance() / lip) * spend_direction(s.x, exact);
    const Vector cert = gradient(cand);
    if (target.accepts(cand, cert)) return {cand, cert, 1};
  }
  return {exact, gradient(exact), 1};
}

admm::BlockSolution QuadraticToy::minimize_y(const admm::IterateState& s, const Vector& x_next,
                                             double sigma, const admm::BlockTarget& target) {
  const double lip = 2.0 + sigma + pg_;
  const Vector exact = (2.0 * b_ - s.z - sigma * (x_next - c_) + pg_ * s.y) / lip;
  auto gradient = [&](const Vector& y) -> Vector {
    return 2.0 * (y - b_) + s.z + sigma * (x_next + y - c_) + pg_ * (y - s.y);
  };
  if (spend_ > 0.0 && target.criterion() == admm::Criterion::c1) {
    const Vector cand = exact + (spend_ * target.tolerance() / lip) * spend_direction(s.y, exact);
    const Vector cert = gradient(cand);
    if (target.accepts(cand, cert)) return {cand, cert, 1};
  }
  return {exact, gradient(exact), 1};
}

double QuadraticToy::x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const {
  return (w.prox * pf_ + w.strong * 2.0 + w.coupling * sigma) * v.squaredNorm();
}

double QuadraticToy::y_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const {
  return (w.prox * pg_ + w.strong * 2.0 + w.coupling * sigma) * v.squaredNorm();
}

double QuadraticToy::objective(const Vector& x, const Vector& y) const {
  return (x - a_).squaredNorm() + (y - b_).squaredNorm();
}

admm::IterateState QuadraticToy::solution() const {
  const Vector l = 0.5 * (a_ + b_ - c_);
  return {a_ - l, b_ - l, 2.0 * l};
}

admm::IterateState QuadraticToy::start() const {
  const Vector zero = Vector::Zero(a_.size());
  return {zero, zero, zero};
}

}  // namespace padmm::problems
