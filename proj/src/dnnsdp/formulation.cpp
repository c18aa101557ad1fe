#include <algorithm>

#include "formulations.hpp"
#include "padmm/errors.hpp"

namespace padmm::dnnsdp {

Formulation::Formulation(const DnnsdpProblem& p, double epsilon)
    : p_(p), eps_(epsilon), n2_(p.n * p.n) {
  p.validate();
  if (!(epsilon >= 0.0)) throw InvalidInputError("proximal weight eps must be nonnegative");
  const Matrix g = p.AE.gram();
  ae_factor_ = linalg::CholeskyFactor(g);
  ae_lambda_min_ =
      g.rows() > 0 ? Eigen::SelfAdjointEigenSolver<Matrix>(g, Eigen::EigenvaluesOnly).eigenvalues()(0)
                   : 0.0;
}

admm::BlockSolution Formulation::minimize_x(const admm::IterateState& s, double sigma,
                                            const admm::BlockTarget& target) {
  BlockOutcome out = block_x(unpack(s), sigma, target);
  return {pack_x(out.iterate), std::move(out.certificate), out.sweeps};
}

admm::BlockSolution Formulation::minimize_y(const admm::IterateState& s, const Vector& x_next,
                                            double sigma, const admm::BlockTarget& target) {
  BlockOutcome out = block_y(unpack({x_next, s.y, s.z}), sigma, target);
  return {pack_y(out.iterate), std::move(out.certificate), out.sweeps};
}

double Formulation::objective(const Vector& x, const Vector& y) const {
  return -dual_objective(p_, unpack({x, y, Vector()}));
}

double Formulation::relaxed_floor(const admm::IterateState& s, double) const {
  const DualIterate it = unpack(s);
  const double eta_p = (p_.AE.apply(it.X) - p_.bE).norm() / (1.0 + p_.bE.norm());
  double dual_sq = dual_residual(it).dense().squaredNorm();
  if (it.zSlack.size() > 0) dual_sq += (it.yI - it.zSlack).squaredNorm();
  const double eta_d = std::sqrt(dual_sq) / (1.0 + p_.C.norm());
  return 0.1 * std::max(eta_p, eta_d);
}

SymMatrix Formulation::dual_residual(const DualIterate& it) const {
  SymMatrix r = it.Z + it.S - p_.C;
  p_.AE.adjoint_accumulate(it.yE, r);
  if (p_.m_i() > 0 && it.yI.size() > 0) p_.AI.adjoint_accumulate(it.yI, r);
  return r;
}

std::unique_ptr<Formulation> make_formulation(const DnnsdpProblem& p, Variant v, double epsilon) {
  const bool baseline = is_baseline(v);
  const double eps = baseline ? 0.0 : epsilon;
  switch (v) {
    case Variant::alg1:
    case Variant::admm3d:
      if (p.m_i() > 0) throw InvalidInputError(to_string(v) + " requires m_I = 0");
      return std::make_unique<detail::Alg1Formulation>(p, eps, v);
    case Variant::alg2:
    case Variant::padmm4d:
      if (p.m_i() == 0) throw InvalidInputError(to_string(v) + " requires m_I > 0");
      return std::make_unique<detail::Alg2Formulation>(p, eps, baseline ? 1.0 : 1.01, v);
    case Variant::alg3:
    case Variant::admm4d:
      if (p.m_i() == 0) throw InvalidInputError(to_string(v) + " requires m_I > 0");
      return std::make_unique<detail::Alg3Formulation>(p, eps, v);
  }
  throw InvalidInputError("unknown variant");
}

}  // namespace padmm::dnnsdp
