#include <algorithm>
#include <cmath>

#include "padmm/dnnsdp.hpp"
#include "padmm/errors.hpp"

namespace padmm::dnnsdp {

namespace {

bool same(const Vector& a, const Vector& b) { return a.size() == b.size() && a == b; }

}  // namespace

void DnnsdpProblem::validate() const {
  if (n < 1) throw InvalidInputError("problem dimension must be positive");
  if (C.dim() != n || M.dim() != n) throw InvalidInputError("C and M must be n x n");
  if (AE.dim() != n || AI.dim() != n) throw InvalidInputError("constraint maps must act on S^n");
  if (bE.size() != m_e() || bI.size() != m_i())
    throw InvalidInputError("right-hand sides must match the constraint counts");
  if (!C.is_finite() || !M.is_finite() || !bE.allFinite() || !bI.allFinite())
    throw InvalidInputError("problem data must be finite");
  linalg::CholeskyFactor check(AE.gram());
}

bool identical(const DnnsdpProblem& a, const DnnsdpProblem& b) {
  return a.n == b.n && a.C == b.C && a.M == b.M && a.AE == b.AE && same(a.bE, b.bE) &&
         a.AI == b.AI && same(a.bI, b.bI);
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::alg1: return "alg1";
    case Variant::alg2: return "alg2";
    case Variant::alg3: return "alg3";
    case Variant::admm3d: return "admm3d";
    case Variant::padmm4d: return "padmm4d";
    case Variant::admm4d: return "admm4d";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  for (Variant v : {Variant::alg1, Variant::alg2, Variant::alg3, Variant::admm3d,
                    Variant::padmm4d, Variant::admm4d})
    if (to_string(v) == s) return v;
  throw InvalidInputError("unknown variant '" + s + "'");
}

bool is_baseline(Variant v) {
  return v == Variant::admm3d || v == Variant::padmm4d || v == Variant::admm4d;
}

bool uses_slack(Variant v) { return v == Variant::alg3 || v == Variant::admm4d; }

DualIterate DualIterate::zeros(const DnnsdpProblem& p, bool slack) {
  DualIterate it;
  it.yI = Vector::Zero(p.m_i());
  if (slack) {
    it.zSlack = Vector::Zero(p.m_i());
    it.xSlack = Vector::Zero(p.m_i());
  }
  it.Z = SymMatrix(p.n);
  it.yE = Vector::Zero(p.m_e());
  it.S = SymMatrix(p.n);
  it.X = SymMatrix(p.n);
  return it;
}

double primal_objective(const DnnsdpProblem& p, const DualIterate& it) { return p.C.inner(it.X); }

double dual_objective(const DnnsdpProblem& p, const DualIterate& it) {
  double v = p.bE.dot(it.yE) + p.M.inner(it.Z);
  if (p.m_i() > 0) v += p.bI.dot(it.yI);
  return v;
}

double delta_bound(double sigma, double epsilon, double ae_lambda_min) {
  const double a = std::sqrt(sigma + epsilon);
  return (a - std::sqrt(sigma)) * std::min(a, sigma * ae_lambda_min / a);
}

double theta_bound(double rho, double ai_lambda_max) {
  return std::min(rho, 1.0 - ai_lambda_max / rho);
}

SymMatrix alg1_update_S(const DnnsdpProblem& p, const SymMatrix& Z, const Vector& yE,
                        const SymMatrix& X, double sigma) {
  SymMatrix arg = p.C - Z - (1.0 / sigma) * X;
  arg -= p.AE.adjoint(yE);
  return linalg::project_psd(arg);
}

void alg3_update_multipliers(const DnnsdpProblem& p, DualIterate& it, double sigma, double tau) {
  SymMatrix r = it.Z + it.S - p.C;
  p.AE.adjoint_accumulate(it.yE, r);
  p.AI.adjoint_accumulate(it.yI, r);
  it.X += (tau * sigma) * r;
  it.xSlack += (tau * sigma) * (it.yI - it.zSlack);
}

}  // namespace padmm::dnnsdp
