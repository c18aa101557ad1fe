#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "padmm/dnnsdp.hpp"
#include "padmm/errors.hpp"
#include "padmm/problems.hpp"
#include "test_support.hpp"

namespace padmm::dnnsdp {
namespace {

using problems::gen_planted;
using problems::PlantedInstance;

// ---------------------------------------------------------------------------
// Straight-line residual oracle on dense matrices.

Matrix dense_row(const ConstraintMap& a, int r) {
  Matrix m = Matrix::Zero(a.dim(), a.dim());
  for (const auto& e : a.row(r)) {
    m(e.row, e.col) += e.value;
    if (e.row != e.col) m(e.col, e.row) += e.value;
  }
  return m;
}

Matrix psd_part(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  const Vector lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

struct OracleResiduals {
  std::vector<double> eta;  // P, D, S, K, S*, K*, C1, C2, I, I*
};

OracleResiduals oracle_residuals(const DnnsdpProblem& p, const DualIterate& it) {
  const Matrix X = it.X.dense(), S = it.S.dense(), Z = it.Z.dense(), C = p.C.dense(),
               M = p.M.dense();
  Vector ax(p.m_e());
  Matrix dual = Z + S - C;
  for (int r = 0; r < p.m_e(); ++r) {
    const Matrix A = dense_row(p.AE, r);
    ax(r) = (A.array() * X.array()).sum();
    dual += it.yE(r) * A;
  }
  Vector aix(p.m_i());
  for (int r = 0; r < p.m_i(); ++r) {
    const Matrix A = dense_row(p.AI, r);
    aix(r) = (A.array() * X.array()).sum();
    dual += it.yI(r) * A;
  }
  double dual_sq = dual.squaredNorm();
  if (it.zSlack.size() > 0) dual_sq += (it.yI - it.zSlack).squaredNorm();
  const double nx = X.norm(), ns = S.norm(), nz = Z.norm();
  OracleResiduals o;
  o.eta.push_back((ax - p.bE).norm() / (1.0 + p.bE.norm()));
  o.eta.push_back(std::sqrt(dual_sq) / (1.0 + C.norm()));
  o.eta.push_back(psd_part(-X).norm() / (1.0 + nx));
  o.eta.push_back((M - X).cwiseMax(0.0).norm() / (1.0 + nx));
  o.eta.push_back(psd_part(-S).norm() / (1.0 + ns));
  o.eta.push_back((-Z).cwiseMax(0.0).norm() / (1.0 + nz));
  o.eta.push_back(std::abs((X.array() * S.array()).sum()) / (1.0 + nx + ns));
  o.eta.push_back(std::abs(((X - M).array() * Z.array()).sum()) / (1.0 + nx + nz));
  if (p.m_i() > 0) {
    o.eta.push_back((p.bI - aix).cwiseMax(0.0).norm() / (1.0 + p.bI.norm()));
    o.eta.push_back((-it.yI).cwiseMax(0.0).norm() / (1.0 + it.yI.norm()));
  }
  return o;
}

std::vector<double> components(const ResidualReport& r) {
  std::vector<double> v{r.eta_P,     r.eta_D,     r.eta_S,  r.eta_K, r.eta_Sstar,
                        r.eta_Kstar, r.eta_C1,    r.eta_C2};
  if (r.inequalities) {
    v.push_back(r.eta_I);
    v.push_back(r.eta_Istar);
  }
  return v;
}

DualIterate random_iterate(std::mt19937_64& rng, const DnnsdpProblem& p, bool slack) {
  DualIterate it;
  it.X = testing::random_sym(rng, p.n);
  it.S = testing::random_sym(rng, p.n);
  it.Z = testing::random_sym(rng, p.n);
  it.yE = testing::random_vector(rng, p.m_e());
  it.yI = testing::random_vector(rng, p.m_i());
  if (slack) {
    it.zSlack = testing::random_vector(rng, p.m_i());
    it.xSlack = testing::random_vector(rng, p.m_i());
  }
  return it;
}

TEST(Residuals, VanishAtPlantedPoint) {
  for (int m_i : {0, 12}) {
    const PlantedInstance inst = gen_planted(31 + m_i, 10, 15, m_i);
    EXPECT_LE(kkt_residuals(inst.problem, inst.solution).eta, 1e-10);
    if (m_i > 0) {
      const auto r = kkt_residuals(inst.problem, problems::with_slack(inst));
      EXPECT_TRUE(r.inequalities);
      EXPECT_LE(r.eta, 1e-10);
    }
  }
}

TEST(Residuals, ZeroIterateFormulas) {
  const PlantedInstance inst = gen_planted(32, 8, 10, 0);
  const DnnsdpProblem& p = inst.problem;
  ASSERT_GT(p.bE.norm(), 0.0);
  const auto r = kkt_residuals(p, DualIterate::zeros(p, false));
  EXPECT_DOUBLE_EQ(r.eta_P, p.bE.norm() / (1.0 + p.bE.norm()));
  EXPECT_DOUBLE_EQ(r.eta_D, p.C.norm() / (1.0 + p.C.norm()));
  EXPECT_FALSE(r.inequalities);
}

TEST(Residuals, MatchIndependentReimplementation) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 6; ++trial) {
    const int m_i = trial % 2 == 0 ? 0 : 7;
    PlantedInstance inst = gen_planted(100 + trial, 6, 8, m_i);
    // A nonzero shift exercises the M terms.
    inst.problem.M = SymMatrix(Matrix(-0.1 * Matrix::Ones(6, 6)));
    const bool slack = m_i > 0 && trial % 4 == 1;
    const DualIterate it = random_iterate(rng, inst.problem, slack);
    const auto got = components(kkt_residuals(inst.problem, it));
    const auto want = oracle_residuals(inst.problem, it).eta;
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      EXPECT_NEAR(got[i], want[i], 1e-14 * (1.0 + want[i])) << "component " << i;
    double mx = 0.0;
    for (double v : want) mx = std::max(mx, v);
    EXPECT_NEAR(kkt_residuals(inst.problem, it).eta, mx, 1e-14);
  }
}

TEST(Residuals, RejectMismatchedDimensions) {
  const PlantedInstance inst = gen_planted(34, 5, 4, 0);
  DualIterate it = DualIterate::zeros(inst.problem, false);
  it.yE = Vector::Zero(3);
  EXPECT_THROW(kkt_residuals(inst.problem, it), InvalidInputError);
}

TEST(Objectives, AgreeAtPlantedPoint) {
  const PlantedInstance inst = gen_planted(35, 9, 12, 10);
  const double pv = primal_objective(inst.problem, inst.solution);
  const double dv = dual_objective(inst.problem, inst.solution);
  EXPECT_DOUBLE_EQ(pv, inst.optimal_value);
  EXPECT_NEAR(pv, dv, 1e-10 * (1.0 + std::abs(pv)));
}

TEST(Problem, ValidateRejectsRankDeficientEqualities) {
  PlantedInstance inst = gen_planted(36, 4, 3, 0);
  inst.problem.AE.add_row(inst.problem.AE.row(0));
  inst.problem.bE.conservativeResize(4);
  inst.problem.bE(3) = inst.problem.bE(0);
  EXPECT_THROW(inst.problem.validate(), SingularOperatorError);
}

TEST(Bounds, DeltaAndThetaFormulas) {
  const double s = 2.0, e = 0.5, lam = 3.0;
  const double expect =
      (std::sqrt(s + e) - std::sqrt(s)) * std::min(std::sqrt(s + e), s * lam / std::sqrt(s + e));
  EXPECT_DOUBLE_EQ(delta_bound(s, e, lam), expect);
  EXPECT_DOUBLE_EQ(delta_bound(s, 0.0, lam), 0.0);
  EXPECT_DOUBLE_EQ(theta_bound(2.0, 1.0), std::min(2.0, 1.0 - 1.0 / 2.0));
}

TEST(UpdateS, PsdArgumentUnchangedAndNsdToZero) {
  const PlantedInstance inst = gen_planted(37, 5, 4, 0);
  DnnsdpProblem p = inst.problem;
  std::mt19937_64 rng(38);
  const SymMatrix psd = testing::random_psd(rng, 5, 5);
  p.C = psd;
  const SymMatrix zero(5);
  const Vector ye = Vector::Zero(p.m_e());
  const SymMatrix s = alg1_update_S(p, zero, ye, zero, 1.0);
  EXPECT_LE((s - psd).norm(), 1e-12 * psd.norm());
  p.C = -psd;
  EXPECT_LE(alg1_update_S(p, zero, ye, zero, 1.0).norm(), 1e-12 * psd.norm());
}

TEST(UpdateS, SatisfiesVariationalInequality) {
  const PlantedInstance inst = gen_planted(39, 6, 5, 0);
  std::mt19937_64 rng(40);
  const DualIterate it = random_iterate(rng, inst.problem, false);
  const double sigma = 0.7;
  const SymMatrix s = alg1_update_S(inst.problem, it.Z, it.yE, it.X, sigma);
  SymMatrix arg = inst.problem.C - it.Z - (1.0 / sigma) * it.X;
  arg -= inst.problem.AE.adjoint(it.yE);
  for (int k = 0; k < 100; ++k) {
    const SymMatrix y = testing::random_psd(rng, 6, 1 + k % 6);
    EXPECT_LE((arg - s).inner(y - s), 1e-10 * (1.0 + arg.norm()) * (1.0 + y.norm()));
  }
}

TEST(Multipliers, SlackUpdateIdentities) {
  const PlantedInstance inst = gen_planted(41, 5, 4, 6);
  DualIterate it = problems::with_slack(inst);
  const DualIterate before = it;
  alg3_update_multipliers(inst.problem, it, 0.8, 1.3);
  EXPECT_LE((it.X - before.X).norm(), 1e-12);
  EXPECT_LE((it.xSlack - before.xSlack).norm(), 1e-15);

  it = before;
  it.zSlack = it.yI;
  it.zSlack(0) -= 1.0;
  alg3_update_multipliers(inst.problem, it, 1.0, 1.0);
  Vector e1 = Vector::Zero(6);
  e1(0) = 1.0;
  EXPECT_LE((it.xSlack - before.xSlack - e1).norm(), 1e-15);

  std::mt19937_64 rng(42);
  DualIterate r = random_iterate(rng, inst.problem, true);
  const DualIterate r0 = r;
  alg3_update_multipliers(inst.problem, r, 0.3, 1.618);
  SymMatrix h = r0.Z + r0.S - inst.problem.C;
  inst.problem.AE.adjoint_accumulate(r0.yE, h);
  inst.problem.AI.adjoint_accumulate(r0.yI, h);
  EXPECT_LE((r.X - r0.X - (0.3 * 1.618) * h).norm(), 1e-13 * (1.0 + h.norm()));
  EXPECT_LE((r.xSlack - r0.xSlack - (0.3 * 1.618) * (r0.yI - r0.zSlack)).norm(), 1e-14);
}

// ---------------------------------------------------------------------------
// Blocks.

/// Target that never accepts, so the block runs exactly `sweeps` sweeps.
admm::BlockTarget sweeps_target(int sweeps) {
  return admm::BlockTarget(admm::Criterion::c1, 1e-300, 0.0, 1.0, sweeps, {});
}

DualIterate planted_iterate(const PlantedInstance& inst, Variant v) {
  return uses_slack(v) ? problems::with_slack(inst) : inst.solution;
}

TEST(Blocks, PlantedPointIsStationary) {
  const PlantedInstance eq = gen_planted(43, 8, 10, 0);
  const PlantedInstance ineq = gen_planted(44, 8, 10, 12);
  for (Variant v : {Variant::alg1, Variant::alg2, Variant::alg3}) {
    const PlantedInstance& inst = v == Variant::alg1 ? eq : ineq;
    const auto form = make_formulation(inst.problem, v, 1e-5);
    const DualIterate it = planted_iterate(inst, v);
    for (double sigma : {0.1, 1.0, 7.0}) {
      const auto bx = form->block_x(it, sigma, sweeps_target(1));
      const double scale = 1.0 + inst.solution.X.norm() + inst.solution.Z.norm();
      EXPECT_LE(bx.certificate.norm(), 1e-9 * scale * sigma) << to_string(v);
      EXPECT_LE((bx.iterate.Z - it.Z).norm(), 1e-9 * scale) << to_string(v);
      EXPECT_LE((bx.iterate.yI - it.yI).norm(), 1e-9 * scale) << to_string(v);
      const auto by = form->block_y(bx.iterate, sigma, sweeps_target(1));
      EXPECT_LE(by.certificate.norm(), 1e-9 * scale * sigma) << to_string(v);
      EXPECT_LE((by.iterate.S - it.S).norm(), 1e-9 * scale) << to_string(v);
      EXPECT_LE((by.iterate.yE - it.yE).norm(), 1e-9 * scale) << to_string(v);
    }
  }
}

/// Block objective of the (Z, y_E) block of the equality formulation.
double alg1_phi(const DnnsdpProblem& p, const DualIterate& at, const DualIterate& k, double sigma,
                double eps) {
  SymMatrix w = at.Z + k.S - p.C + (1.0 / sigma) * k.X;
  p.AE.adjoint_accumulate(at.yE, w);
  const double dz = (at.Z - k.Z).norm();
  return -p.bE.dot(at.yE) - p.M.inner(at.Z) + 0.5 * sigma * w.norm() * w.norm() +
         0.5 * eps * dz * dz;
}

TEST(Blocks, EqualityBlockObjectiveDecreasesAcrossSweeps) {
  const PlantedInstance inst = gen_planted(45, 7, 9, 0);
  std::mt19937_64 rng(46);
  DualIterate k = random_iterate(rng, inst.problem, false);
  k.Z = linalg::project_nonneg(k.Z);
  const double sigma = 0.5, eps = 1e-2;
  const auto form = make_formulation(inst.problem, Variant::alg1, eps);
  double prev = alg1_phi(inst.problem, k, k, sigma, eps);
  for (int j = 1; j <= 5; ++j) {
    const auto out = form->block_x(k, sigma, sweeps_target(j));
    ASSERT_EQ(out.sweeps, j);
    const double now = alg1_phi(inst.problem, out.iterate, k, sigma, eps);
    EXPECT_LT(now, prev + 1e-12 * (1.0 + std::abs(prev))) << "sweep " << j;
    prev = now;
  }
}

TEST(Blocks, InequalityCertificateNonincreasingAfterSecondSweep) {
  const PlantedInstance inst = gen_planted(47, 7, 8, 10);
  std::mt19937_64 rng(48);
  DualIterate k = random_iterate(rng, inst.problem, false);
  k.Z = linalg::project_nonneg(k.Z);
  k.yI = linalg::project_nonneg_vec(k.yI);
  const auto form = make_formulation(inst.problem, Variant::alg2, 1e-5);
  double prev = INFINITY;
  for (int j = 2; j <= 8; ++j) {
    const double now = form->block_x(k, 1.0, sweeps_target(j)).certificate.norm();
    EXPECT_LE(now, prev * (1.0 + 1e-10) + 1e-13) << "sweep " << j;
    prev = now;
  }
}

TEST(Blocks, AcceptedCertificateMeetsTarget) {
  const PlantedInstance inst = gen_planted(49, 8, 10, 10);
  std::mt19937_64 rng(50);
  const DualIterate k = random_iterate(rng, inst.problem, true);
  // A unit proximal weight keeps the two-block alternation well conditioned.
  const auto form = make_formulation(inst.problem, Variant::alg3, 1.0);
  const admm::BlockTarget t(admm::Criterion::c1, 1e-3, 0.0, 1.0, 500, {});
  const auto out = form->block_x(k, 1.0, t);
  EXPECT_LE(out.certificate.norm(), 1e-3);
  EXPECT_LT(out.sweeps, 500);
}

TEST(Metrics, QuadraticFormsDominateFloors) {
  const PlantedInstance eq = gen_planted(51, 6, 8, 0);
  const PlantedInstance ineq = gen_planted(52, 6, 8, 9);
  std::mt19937_64 rng(53);
  for (Variant v : {Variant::alg1, Variant::alg2, Variant::alg3}) {
    const PlantedInstance& inst = v == Variant::alg1 ? eq : ineq;
    const auto form = make_formulation(inst.problem, v, 1e-2);
    const auto packed = form->pack(planted_iterate(inst, v));
    for (double sigma : {0.1, 1.0, 10.0}) {
      const double fx = form->x_metric_floor(sigma), fy = form->y_metric_floor(sigma);
      EXPECT_GT(fx, 0.0) << to_string(v);
      EXPECT_GT(fy, 0.0) << to_string(v);
      for (int t = 0; t < 200; ++t) {
        const Vector rx = testing::random_vector(rng, static_cast<int>(packed.x.size()));
        const Vector ry = testing::random_vector(rng, static_cast<int>(packed.y.size()));
        // Every block stores its matrix part last; directions must be symmetric there.
        const auto sym = [&](Vector d) {
          const int n = inst.problem.n;
          d.tail(static_cast<Eigen::Index>(n) * n) =
              SymMatrix::from_flat(d.tail(static_cast<Eigen::Index>(n) * n), n).flatten();
          return d;
        };
        const Vector dx = sym(rx), dy = sym(ry);
        const double qx = form->x_quadratic(dx, sigma, {});
        const double qy = form->y_quadratic(dy, sigma, {});
        EXPECT_GE(qx, fx * dx.squaredNorm() - 1e-10 * dx.squaredNorm()) << to_string(v);
        EXPECT_GE(qy, fy * dy.squaredNorm() - 1e-10 * dy.squaredNorm()) << to_string(v);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Adaptation.

ResidualReport report(double primal, double dual) {
  ResidualReport r;
  r.eta_P = primal;
  r.eta_D = dual;
  return r;
}

TEST(Adaptation, BalancedResidualsKeepSigma) {
  const std::vector<ResidualReport> w(10, report(1e-3, 1e-3));
  EXPECT_DOUBLE_EQ(adapt_sigma(w, 2.0, AdaptationPolicy{}), 2.0);
}

TEST(Adaptation, LiteralRuleRaisesOnPrimalDominance) {
  AdaptationPolicy pol;
  pol.raise_on_primal = true;
  const std::vector<ResidualReport> w(10, report(1.0, 0.01));
  EXPECT_DOUBLE_EQ(adapt_sigma(w, 2.0, pol), 2.0 * 1.4);
  EXPECT_DOUBLE_EQ(adapt_sigma(w, 9000.0, pol), 1e4);
  const std::vector<ResidualReport> d(10, report(0.01, 1.0));
  EXPECT_DOUBLE_EQ(adapt_sigma(d, 2.0, pol), 2.0 / 1.4);
}

TEST(Adaptation, DefaultRuleLowersOnPrimalDominance) {
  const AdaptationPolicy pol;
  const std::vector<ResidualReport> w(10, report(1.0, 0.01));
  EXPECT_DOUBLE_EQ(adapt_sigma(w, 2.0, pol), 2.0 / 1.4);
  EXPECT_DOUBLE_EQ(adapt_sigma(w, 1.2e-4, pol), 1e-4);
  const std::vector<ResidualReport> d(10, report(0.01, 1.0));
  EXPECT_DOUBLE_EQ(adapt_sigma(d, 2.0, pol), 2.0 * 1.4);
}

TEST(Adaptation, WindowUsesGeometricMeanAndAggressiveMode) {
  const AdaptationPolicy pol;
  // Ratios 100 and 1/100 cancel.
  const std::vector<ResidualReport> w{report(1.0, 0.01), report(0.01, 1.0)};
  EXPECT_DOUBLE_EQ(adapt_sigma(w, 3.0, pol), 3.0);
  const std::vector<ResidualReport> mild(4, report(2.0, 1.0));
  EXPECT_DOUBLE_EQ(adapt_sigma(mild, 3.0, pol), 3.0);
  EXPECT_DOUBLE_EQ(adapt_sigma(mild, 3.0, pol, true), 3.0 / (1.4 * 1.4));
}

TEST(Adaptation, RestartCheck) {
  AdaptationPolicy pol;
  pol.restart_window = 10;
  std::vector<double> geometric, flat(30, 1e-3);
  for (int i = 0; i < 30; ++i) geometric.push_back(std::pow(0.9, i));
  EXPECT_FALSE(restart_check(geometric, pol));
  EXPECT_TRUE(restart_check(flat, pol));
  EXPECT_FALSE(restart_check(std::vector<double>(10, 1.0), pol));
}

TEST(Adaptation, PolicyValidation) {
  AdaptationPolicy pol;
  EXPECT_NO_THROW(pol.validate());
  pol.scale_factor = 1.0;
  EXPECT_THROW(pol.validate(), InvalidInputError);
  pol = {};
  pol.sigma_min = 10.0;
  pol.sigma_max = 1.0;
  EXPECT_THROW(pol.validate(), InvalidInputError);
}

// ---------------------------------------------------------------------------
// Solver.

TEST(Solve, EqualityPlantedInstanceConverges) {
  const PlantedInstance inst = gen_planted(54, 10, 15, 0);
  const auto res = solve_dnnsdp(inst.problem, Variant::alg1, default_solver_config(Variant::alg1));
  ASSERT_EQ(res.status, admm::Status::converged) << res.message;
  EXPECT_LT(res.residuals.eta, 1e-6);
  EXPECT_LE(std::abs(res.primal_value - inst.optimal_value), 1e-4 * (1.0 + std::abs(inst.optimal_value)));
}

TEST(Solve, InequalityVariantsAgree) {
  const PlantedInstance inst = gen_planted(55, 9, 10, 14);
  const auto a = solve_dnnsdp(inst.problem, Variant::alg2, default_solver_config(Variant::alg2));
  const auto b = solve_dnnsdp(inst.problem, Variant::alg3, default_solver_config(Variant::alg3));
  ASSERT_EQ(a.status, admm::Status::converged) << a.message;
  ASSERT_EQ(b.status, admm::Status::converged) << b.message;
  EXPECT_LE(std::abs(a.primal_value - b.primal_value), 1e-5 * (1.0 + std::abs(a.primal_value)));
}

TEST(Solve, ZeroIterationLimit) {
  const PlantedInstance inst = gen_planted(56, 5, 4, 0);
  auto cfg = default_solver_config(Variant::alg1);
  cfg.engine.k_max = 0;
  const auto res = solve_dnnsdp(inst.problem, Variant::alg1, cfg);
  EXPECT_EQ(res.status, admm::Status::iteration_limit);
  EXPECT_EQ(res.iterations, 0);
}

TEST(Solve, VariantRequirements) {
  const PlantedInstance eq = gen_planted(57, 5, 4, 0);
  const PlantedInstance ineq = gen_planted(58, 5, 4, 3);
  EXPECT_THROW(solve_dnnsdp(ineq.problem, Variant::alg1, default_solver_config(Variant::alg1)),
               InvalidInputError);
  EXPECT_THROW(solve_dnnsdp(eq.problem, Variant::alg2, default_solver_config(Variant::alg2)),
               InvalidInputError);
  EXPECT_THROW(variant_from_string("alg9"), InvalidInputError);
  for (Variant v : {Variant::alg1, Variant::alg2, Variant::alg3, Variant::admm3d,
                    Variant::padmm4d, Variant::admm4d})
    EXPECT_EQ(variant_from_string(to_string(v)), v);
}

TEST(Solve, MultiplierIdentityHoldsEveryIteration) {
  const PlantedInstance inst = gen_planted(59, 7, 8, 8);
  for (Variant v : {Variant::alg2, Variant::alg3}) {
    auto cfg = default_solver_config(v);
    cfg.engine.k_max = 60;
    double worst = 0.0;
    solve_dnnsdp(inst.problem, v, cfg, [&](const Formulation& f, const admm::IterationEvent& ev) {
      const DualIterate before = f.unpack(ev.before);
      const DualIterate after = f.unpack(ev.step.state);
      DualIterate moved = after;
      moved.X = before.X;
      moved.xSlack = before.xSlack;
      if (uses_slack(v)) {
        alg3_update_multipliers(f.problem(), moved, ev.sigma, ev.tau);
        worst = std::max(worst, (moved.xSlack - after.xSlack).norm());
      } else {
        SymMatrix h = after.Z + after.S - f.problem().C;
        f.problem().AE.adjoint_accumulate(after.yE, h);
        f.problem().AI.adjoint_accumulate(after.yI, h);
        moved.X += (ev.tau * ev.sigma) * h;
      }
      worst = std::max(worst, (moved.X - after.X).norm() / (1.0 + after.X.norm()));
    });
    EXPECT_LE(worst, 1e-13) << to_string(v);
  }
}

TEST(Solve, BaselinesRunSingleSweeps) {
  const PlantedInstance inst = gen_planted(60, 6, 6, 6);
  for (Variant v : {Variant::padmm4d, Variant::admm4d}) {
    auto cfg = default_solver_config(v);
    cfg.engine.k_max = 30;
    const auto res = solve_dnnsdp(inst.problem, v, cfg);
    EXPECT_EQ(res.iterations, 30) << to_string(v);
    EXPECT_EQ(res.inner_x_total, 30) << to_string(v);
  }
}

TEST(Solve, AdaptiveSigmaWithinThreeTimesBestFixedSigma) {
  for (std::uint64_t seed : {61u, 62u, 63u}) {
    const PlantedInstance inst = gen_planted(seed, 10, 14, 0);
    auto cfg = default_solver_config(Variant::alg1);
    const auto adaptive = solve_dnnsdp(inst.problem, Variant::alg1, cfg);
    ASSERT_EQ(adaptive.status, admm::Status::converged) << adaptive.message;
    int best = cfg.engine.k_max;
    for (double sigma : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      auto fixed = cfg;
      fixed.policy.enabled = false;
      fixed.engine.sigma = sigma;
      const auto r = solve_dnnsdp(inst.problem, Variant::alg1, fixed);
      if (r.status == admm::Status::converged) best = std::min(best, r.iterations);
    }
    EXPECT_LE(adaptive.iterations, 3 * best) << "seed " << seed;
  }
}

}  // namespace
}  // namespace padmm::dnnsdp
