#include <algorithm>
#include <cmath>

#include "padmm/dnnsdp.hpp"
#include "padmm/errors.hpp"

namespace padmm::dnnsdp {

ResidualReport kkt_residuals(const DnnsdpProblem& p, const DualIterate& it) {
  const int n = p.n;
  if (it.X.dim() != n || it.Z.dim() != n || it.S.dim() != n || it.yE.size() != p.m_e() ||
      it.yI.size() != p.m_i())
    throw InvalidInputError("iterate dimensions do not match the problem");
  const bool slack = it.zSlack.size() > 0;
  if (slack && (it.zSlack.size() != p.m_i() || it.xSlack.size() != p.m_i()))
    throw InvalidInputError("slack dimensions do not match the problem");

  ResidualReport r;
  const double nx = it.X.norm();
  const double ns = it.S.norm();
  const double nz = it.Z.norm();

  r.eta_P = (p.AE.apply(it.X) - p.bE).norm() / (1.0 + p.bE.norm());

  SymMatrix dual = it.Z + it.S - p.C;
  p.AE.adjoint_accumulate(it.yE, dual);
  if (p.m_i() > 0) p.AI.adjoint_accumulate(it.yI, dual);
  double dual_sq = dual.dense().squaredNorm();
  if (slack) dual_sq += (it.yI - it.zSlack).squaredNorm();
  r.eta_D = std::sqrt(dual_sq) / (1.0 + p.C.norm());

  const SymMatrix shifted = it.X - p.M;
  r.eta_S = linalg::project_psd(-it.X).norm() / (1.0 + nx);
  r.eta_K = linalg::project_nonneg(-shifted).norm() / (1.0 + nx);
  r.eta_Sstar = linalg::project_psd(-it.S).norm() / (1.0 + ns);
  r.eta_Kstar = linalg::project_nonneg(-it.Z).norm() / (1.0 + nz);
  r.eta_C1 = std::abs(it.X.inner(it.S)) / (1.0 + nx + ns);
  r.eta_C2 = std::abs(shifted.inner(it.Z)) / (1.0 + nx + nz);
  r.eta = std::max({r.eta_P, r.eta_D, r.eta_S, r.eta_K, r.eta_Sstar, r.eta_Kstar, r.eta_C1,
                    r.eta_C2});

  if (p.m_i() > 0) {
    r.inequalities = true;
    r.eta_I = (p.bI - p.AI.apply(it.X)).cwiseMax(0.0).norm() / (1.0 + p.bI.norm());
    r.eta_Istar = (-it.yI).cwiseMax(0.0).norm() / (1.0 + it.yI.norm());
    r.eta = std::max({r.eta, r.eta_I, r.eta_Istar});
  }
  return r;
}

}  // namespace padmm::dnnsdp
