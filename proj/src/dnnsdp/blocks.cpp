#include <algorithm>
#include <cmath>

#include "formulations.hpp"
#include "padmm/errors.hpp"

namespace padmm::dnnsdp::detail {

namespace {

SymMatrix matrix_at(const Vector& v, Eigen::Index offset, int n) {
  return SymMatrix::from_flat(v.segment(offset, static_cast<Eigen::Index>(n) * n), n);
}

Vector concat(std::initializer_list<const Vector*> parts) {
  Eigen::Index len = 0;
  for (const Vector* p : parts) len += p->size();
  Vector out(len);
  Eigen::Index at = 0;
  for (const Vector* p : parts) {
    out.segment(at, p->size()) = *p;
    at += p->size();
  }
  return out;
}

/// Smallest eigenvalue of [rho s; s 1] minimized over s^2 <= lambda_max, and of the
/// decoupled directions with eigenvalues rho and 1.
double coupled_floor(double rho, double lambda_max) {
  const double pair = 0.5 * ((rho + 1.0) - std::sqrt((rho - 1.0) * (rho - 1.0) + 4.0 * lambda_max));
  return std::min({pair, rho, 1.0});
}

}  // namespace

// ---------------------------------------------------------------------------
// Equality-only formulation.

Alg1Formulation::Alg1Formulation(const DnnsdpProblem& p, double epsilon, Variant v)
    : Formulation(p, epsilon), variant_(v) {}

Vector Alg1Formulation::pack_x(const DualIterate& it) const {
  const Vector z = it.Z.flatten();
  return concat({&z, &it.yE});
}

Vector Alg1Formulation::pack_y(const DualIterate& it) const { return it.S.flatten(); }

admm::IterateState Alg1Formulation::pack(const DualIterate& it) const {
  return {pack_x(it), pack_y(it), it.X.flatten()};
}

DualIterate Alg1Formulation::unpack(const admm::IterateState& s) const {
  DualIterate it;
  it.yI = Vector::Zero(0);
  it.Z = matrix_at(s.x, 0, p_.n);
  it.yE = s.x.segment(n2_, p_.m_e());
  it.S = matrix_at(s.y, 0, p_.n);
  it.X = s.z.size() > 0 ? matrix_at(s.z, 0, p_.n) : SymMatrix(p_.n);
  return it;
}

BlockOutcome Alg1Formulation::block_x(const DualIterate& it, double sigma,
                                      const admm::BlockTarget& target) const {
  const double eps = eps_;
  const SymMatrix base = sigma * (p_.C - it.S) - it.X + p_.M + eps * it.Z;
  const Vector rhs0 = (p_.bE - p_.AE.apply(it.X)) / sigma + p_.AE.apply(p_.C - it.S);
  const Vector zero_ye = Vector::Zero(p_.m_e());

  BlockOutcome out{it, Vector(), 0};
  Vector ye_prev = it.yE;
  for (int j = 1; j <= target.inner_cap(); ++j) {
    SymMatrix arg = base;
    p_.AE.adjoint_accumulate(-sigma * ye_prev, arg);
    out.iterate.Z = linalg::project_nonneg((1.0 / (sigma + eps)) * arg);
    out.iterate.yE = solve_ye(rhs0 - p_.AE.apply(out.iterate.Z));
    const Vector xi = p_.AE.adjoint(sigma * (out.iterate.yE - ye_prev)).flatten();
    out.certificate = concat({&xi, &zero_ye});
    out.sweeps = j;
    if (target.accepts(pack_x(out.iterate), out.certificate)) break;
    ye_prev = out.iterate.yE;
  }
  return out;
}

BlockOutcome Alg1Formulation::block_y(const DualIterate& it, double sigma,
                                      const admm::BlockTarget&) const {
  BlockOutcome out{it, Vector::Zero(n2_), 1};
  out.iterate.S = alg1_update_S(p_, it.Z, it.yE, it.X, sigma);
  return out;
}

Vector Alg1Formulation::residual(const Vector& x, const Vector& y) const {
  SymMatrix r = matrix_at(x, 0, p_.n) + matrix_at(y, 0, p_.n) - p_.C;
  p_.AE.adjoint_accumulate(x.segment(n2_, p_.m_e()), r);
  return r.flatten();
}

double Alg1Formulation::x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const {
  const auto dz = v.head(n2_);
  const Vector image = p_.AE.adjoint(v.segment(n2_, p_.m_e())).flatten() + dz;
  return w.prox * eps_ * dz.squaredNorm() + w.coupling * sigma * image.squaredNorm();
}

double Alg1Formulation::y_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const {
  return w.coupling * sigma * v.squaredNorm();
}

double Alg1Formulation::x_metric_floor(double sigma) const {
  return delta_bound(sigma, eps_, ae_lambda_min_);
}

// ---------------------------------------------------------------------------
// Shared (y_E, S) block.

InequalityFormulation::InequalityFormulation(const DnnsdpProblem& p, double epsilon)
    : Formulation(p, epsilon), ai_gram_(p.AI.gram()) {
  ai_spectrum_ = ai_gram_.rows() > 0
                     ? Vector(Eigen::SelfAdjointEigenSolver<Matrix>(ai_gram_, Eigen::EigenvaluesOnly)
                                  .eigenvalues())
                     : Vector::Zero(0);
}

Vector InequalityFormulation::pack_y(const DualIterate& it) const {
  const Vector s = it.S.flatten();
  return concat({&it.yE, &s});
}

void InequalityFormulation::unpack_y(const Vector& y, DualIterate& it) const {
  it.yE = y.head(p_.m_e());
  it.S = matrix_at(y, p_.m_e(), p_.n);
}

Vector InequalityFormulation::y_image(const Vector& y) const {
  return p_.AE.adjoint(y.head(p_.m_e())).flatten() + y.segment(p_.m_e(), n2_);
}

BlockOutcome InequalityFormulation::block_y(const DualIterate& it, double sigma,
                                            const admm::BlockTarget& target) const {
  const double eps = eps_;
  SymMatrix u = it.Z - p_.C;
  p_.AI.adjoint_accumulate(it.yI, u);
  const Vector rhs0 = (p_.bE - p_.AE.apply(it.X)) / sigma - p_.AE.apply(u);
  const SymMatrix base = -sigma * u - it.X + eps * it.S;
  const Vector zero_s = Vector::Zero(n2_);

  BlockOutcome out{it, Vector(), 0};
  SymMatrix s_prev = it.S;
  for (int j = 1; j <= target.inner_cap(); ++j) {
    out.iterate.yE = solve_ye(rhs0 - p_.AE.apply(s_prev));
    SymMatrix arg = base;
    p_.AE.adjoint_accumulate(-sigma * out.iterate.yE, arg);
    out.iterate.S = linalg::project_psd((1.0 / (sigma + eps)) * arg);
    const Vector eta = sigma * p_.AE.apply(out.iterate.S - s_prev);
    out.certificate = concat({&eta, &zero_s});
    out.sweeps = j;
    if (target.accepts(pack_y(out.iterate), out.certificate)) break;
    s_prev = out.iterate.S;
  }
  return out;
}

double InequalityFormulation::y_quadratic(const Vector& v, double sigma,
                                          admm::QuadWeights w) const {
  const auto ds = v.segment(p_.m_e(), n2_);
  return w.prox * eps_ * ds.squaredNorm() + w.coupling * sigma * y_image(v).squaredNorm();
}

double InequalityFormulation::y_metric_floor(double sigma) const {
  return delta_bound(sigma, eps_, ae_lambda_min_);
}

// ---------------------------------------------------------------------------
// Inequality formulation with a proximal term on y_I.

Alg2Formulation::Alg2Formulation(const DnnsdpProblem& p, double epsilon, double rho_scale,
                                 Variant v)
    : InequalityFormulation(p, epsilon), variant_(v) {
  const Matrix& g = ai_gram_;
  const double estimate =
      linalg::lambda_max_estimate([&g](const Vector& u) -> Vector { return g * u; },
                                  static_cast<int>(g.rows()), 1e-12);
  const double exact = ai_spectrum_.size() > 0 ? ai_spectrum_(ai_spectrum_.size() - 1) : 0.0;
  rho_ = rho_scale * estimate;
  if (!(rho_ > 0.0)) throw InvalidInputError("A_I must be nonzero");
  x_floor_unit_ = rho_ > exact ? coupled_floor(rho_, exact) : 0.0;
}

Vector Alg2Formulation::pack_x(const DualIterate& it) const {
  const Vector z = it.Z.flatten();
  return concat({&it.yI, &z});
}

admm::IterateState Alg2Formulation::pack(const DualIterate& it) const {
  return {pack_x(it), pack_y(it), it.X.flatten()};
}

DualIterate Alg2Formulation::unpack(const admm::IterateState& s) const {
  DualIterate it;
  it.yI = s.x.head(p_.m_i());
  it.Z = matrix_at(s.x, p_.m_i(), p_.n);
  unpack_y(s.y, it);
  it.X = s.z.size() > 0 ? matrix_at(s.z, 0, p_.n) : SymMatrix(p_.n);
  return it;
}

BlockOutcome Alg2Formulation::block_x(const DualIterate& it, double sigma,
                                      const admm::BlockTarget& target) const {
  SymMatrix w = it.S - p_.C + (1.0 / sigma) * it.X;
  p_.AE.adjoint_accumulate(it.yE, w);
  // y_I = Pi_+(c0 - A_I Z / rho) with the Z-independent part folded into c0.
  const Vector c0 = it.yI - (ai_gram_ * it.yI + p_.AI.apply(w) - p_.bI / sigma) / rho_;
  const SymMatrix z_base = (1.0 / sigma) * p_.M - w;
  const Vector zero_z = Vector::Zero(n2_);

  BlockOutcome out{it, Vector(), 0};
  SymMatrix z_prev = it.Z;
  for (int j = 1; j <= target.inner_cap(); ++j) {
    out.iterate.yI = linalg::project_nonneg_vec(c0 - p_.AI.apply(z_prev) / rho_);
    SymMatrix arg = z_base;
    p_.AI.adjoint_accumulate(-out.iterate.yI, arg);
    out.iterate.Z = linalg::project_nonneg(arg);
    const Vector xi = sigma * p_.AI.apply(out.iterate.Z - z_prev);
    out.certificate = concat({&xi, &zero_z});
    out.sweeps = j;
    if (target.accepts(pack_x(out.iterate), out.certificate)) break;
    z_prev = out.iterate.Z;
  }
  return out;
}

Vector Alg2Formulation::residual(const Vector& x, const Vector& y) const {
  SymMatrix r = matrix_at(x, p_.m_i(), p_.n) - p_.C;
  p_.AI.adjoint_accumulate(x.head(p_.m_i()), r);
  return r.flatten() + y_image(y);
}

double Alg2Formulation::x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const {
  const Vector dy = v.head(p_.m_i());
  const Vector ai_dy = p_.AI.adjoint(dy).flatten();
  const double prox = sigma * (rho_ * dy.squaredNorm() - ai_dy.squaredNorm());
  const double coupling = sigma * (ai_dy + v.segment(p_.m_i(), n2_)).squaredNorm();
  return w.prox * prox + w.coupling * coupling;
}

double Alg2Formulation::x_metric_floor(double sigma) const { return sigma * x_floor_unit_; }

// ---------------------------------------------------------------------------
// Slack formulation.

Alg3Formulation::Alg3Formulation(const DnnsdpProblem& p, double epsilon, Variant v)
    : InequalityFormulation(p, epsilon), variant_(v) {
  // T_f / sigma decouples along singular directions of A_I into 3x3 blocks
  // [[eps+s^2+1, -1, s], [-1, 1, 0], [s, 0, 1]]; remaining directions have eigenvalue 1.
  double floor = 1.0;
  for (Eigen::Index i = 0; i < ai_spectrum_.size(); ++i) {
    const double s2 = std::max(0.0, ai_spectrum_(i));
    const double s = std::sqrt(s2);
    Eigen::Matrix3d b;
    b << epsilon + s2 + 1.0, -1.0, s, -1.0, 1.0, 0.0, s, 0.0, 1.0;
    floor = std::min(floor, Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(b).eigenvalues()(0));
  }
  x_floor_unit_ = std::max(0.0, floor);
}

Vector Alg3Formulation::pack_x(const DualIterate& it) const {
  const Vector z = it.Z.flatten();
  return concat({&it.yI, &it.zSlack, &z});
}

admm::IterateState Alg3Formulation::pack(const DualIterate& it) const {
  const Vector x = it.X.flatten();
  return {pack_x(it), pack_y(it), concat({&x, &it.xSlack})};
}

DualIterate Alg3Formulation::unpack(const admm::IterateState& s) const {
  const int mi = p_.m_i();
  DualIterate it;
  it.yI = s.x.head(mi);
  it.zSlack = s.x.segment(mi, mi);
  it.Z = matrix_at(s.x, 2 * mi, p_.n);
  unpack_y(s.y, it);
  if (s.z.size() > 0) {
    it.X = matrix_at(s.z, 0, p_.n);
    it.xSlack = s.z.segment(n2_, mi);
  } else {
    it.X = SymMatrix(p_.n);
    it.xSlack = Vector::Zero(mi);
  }
  return it;
}

BlockOutcome Alg3Formulation::block_x(const DualIterate& it, double sigma,
                                      const admm::BlockTarget& target) const {
  const double eps = eps_;
  const int mi = p_.m_i();
  SymMatrix b0 = p_.C - it.S - (1.0 / sigma) * it.X;
  p_.AE.adjoint_accumulate(-it.yE, b0);
  const Vector shift = -(it.xSlack - p_.bI) / sigma + eps * it.yI;
  const SymMatrix z_base = (1.0 / sigma) * p_.M + b0;
  const Matrix& g = ai_gram_;
  const linalg::LinearOperator op = [&g, eps](const Vector& u) -> Vector {
    return g * u + (1.0 + eps) * u;
  };
  const bool single = target.criterion() == admm::Criterion::single_sweep;
  const Vector zero_z = Vector::Zero(mi + n2_);

  BlockOutcome out{it, Vector(), 0};
  Vector slack_prev = it.zSlack;
  SymMatrix z_prev = it.Z;
  Vector y = it.yI;
  // Loosest CG tolerance allowed; tightened whenever the CG residual dominates a rejected certificate.
  double cg_cap = single ? 0.0 : 0.1 * target.tolerance() / sigma;
  for (int j = 1; j <= target.inner_cap(); ++j) {
    const Vector rhs = slack_prev + p_.AI.apply(b0 - z_prev) + shift;
    const double floor = 1e-13 * (1.0 + rhs.norm());
    const double tol = std::max(cg_cap, floor);
    y = linalg::cg_solve(op, rhs, tol, 1000, &y).x;
    const Vector cg_residual = rhs - op(y);
    out.iterate.yI = y;
    out.iterate.zSlack = linalg::project_nonneg_vec(y + it.xSlack / sigma);
    SymMatrix arg = z_base;
    p_.AI.adjoint_accumulate(-y, arg);
    out.iterate.Z = linalg::project_nonneg(arg);
    const Vector xi = sigma * (p_.AI.apply(out.iterate.Z - z_prev) -
                               (out.iterate.zSlack - slack_prev) - cg_residual);
    out.certificate = concat({&xi, &zero_z});
    out.sweeps = j;
    if (target.accepts(pack_x(out.iterate), out.certificate)) break;
    if (sigma * cg_residual.norm() > 0.5 * xi.norm()) cg_cap = 0.01 * cg_residual.norm();
    slack_prev = out.iterate.zSlack;
    z_prev = out.iterate.Z;
  }
  return out;
}

Vector Alg3Formulation::residual(const Vector& x, const Vector& y) const {
  const int mi = p_.m_i();
  SymMatrix r = matrix_at(x, 2 * mi, p_.n) - p_.C;
  p_.AI.adjoint_accumulate(x.head(mi), r);
  const Vector top = r.flatten() + y_image(y);
  const Vector bottom = x.head(mi) - x.segment(mi, mi);
  return concat({&top, &bottom});
}

Vector Alg3Formulation::apply_y_map(const Vector& y) const {
  const Vector top = y_image(y);
  const Vector bottom = Vector::Zero(p_.m_i());
  return concat({&top, &bottom});
}

double Alg3Formulation::x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const {
  const int mi = p_.m_i();
  const Vector dy = v.head(mi);
  const Vector image = p_.AI.adjoint(dy).flatten() + v.segment(2 * mi, n2_);
  const double prox = sigma * eps_ * dy.squaredNorm();
  const double coupling = sigma * (image.squaredNorm() + (dy - v.segment(mi, mi)).squaredNorm());
  return w.prox * prox + w.coupling * coupling;
}

double Alg3Formulation::x_metric_floor(double sigma) const { return sigma * x_floor_unit_; }

}  // namespace padmm::dnnsdp::detail
