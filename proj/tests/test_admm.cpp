#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "padmm/admm.hpp"
#include "padmm/problems.hpp"
#include "test_support.hpp"
#include "validation_cases.hpp"

namespace padmm::admm {
namespace {

using problems::QuadraticToy;

EngineConfig exact_config(double sigma, double tau, int k_max) {
  EngineConfig cfg;
  cfg.sigma = sigma;
  cfg.tau = tau;
  cfg.criterion = Criterion::exact;
  cfg.mu = cfg.nu = ErrorSchedule::zero();
  cfg.k_max = k_max;
  return cfg;
}

struct ToyData {
  Vector a, b, c;
};

ToyData toy_data(std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  return {testing::random_vector(rng, dim), testing::random_vector(rng, dim),
          testing::random_vector(rng, dim)};
}

TEST(Schedule, CapThenPowerDecay) {
  const ErrorSchedule s{0.1, 1.001};
  EXPECT_DOUBLE_EQ(s.at(1), 0.1);
  EXPECT_DOUBLE_EQ(s.at(5), 0.1);
  EXPECT_DOUBLE_EQ(s.at(100), std::pow(100.0, -1.001));
  EXPECT_DOUBLE_EQ(ErrorSchedule::zero().at(7), 0.0);
  EXPECT_DOUBLE_EQ(s.peak(), 0.1);
}

TEST(Schedule, DefaultsAreAdmissible) {
  for (Criterion c : {Criterion::c1, Criterion::c2, Criterion::c2_prime, Criterion::exact}) {
    for (double tau : {1.0, 1.5, 1.6}) {
      EngineConfig cfg;
      cfg.criterion = c;
      cfg.tau = tau;
      cfg.mu = cfg.nu = default_schedule(c, tau, cfg.gamma);
      EXPECT_TRUE(validate_config(cfg).empty()) << to_string(c) << " tau " << tau;
    }
  }
  EXPECT_DOUBLE_EQ(default_schedule(Criterion::c2, 1.618).cap, (2.0 - 1.618) / 4.0);
}

TEST(Validation, DefaultConfigIsAdmissible) { EXPECT_TRUE(validate_config(EngineConfig{}).empty()); }

TEST(Validation, EachCaseNamesItsCondition) {
  const auto cases = testing::validation_cases();
  ASSERT_EQ(cases.size(), 12u);
  for (const auto& tc : cases) {
    const auto v = validate_config(tc.cfg);
    ASSERT_EQ(v.size(), 1u) << tc.name;
    EXPECT_EQ(v[0].code, tc.expected) << tc.name << ": " << v[0].message;
    try {
      require_valid(tc.cfg);
      ADD_FAILURE() << tc.name << " passed require_valid";
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.violations().front().code, tc.expected);
      EXPECT_NE(std::string(e.what()).find(to_string(tc.expected)), std::string::npos);
    }
  }
}

TEST(Validation, OverrideAdmitsLargeTau) {
  EngineConfig cfg;
  cfg.tau = 1.9;
  cfg.allow_large_tau = true;
  cfg.mu = cfg.nu = {0.02, 1.001};
  EXPECT_TRUE(validate_config(cfg).empty());
}

TEST(Validation, ReportsEveryViolation) {
  EngineConfig cfg;
  cfg.sigma = -1.0;
  cfg.k_max = -1;
  cfg.eta_tol = 0.0;
  EXPECT_EQ(validate_config(cfg).size(), 3u);
}

TEST(CriterionFromString, RoundTrip) {
  for (Criterion c : {Criterion::c1, Criterion::c2, Criterion::c2_prime, Criterion::exact,
                      Criterion::single_sweep})
    EXPECT_EQ(criterion_from_string(to_string(c)), c);
  EXPECT_THROW(criterion_from_string("c3"), InvalidInputError);
}

TEST(CriterionFromString, IgnoresCase) {
  EXPECT_EQ(criterion_from_string("C1"), Criterion::c1);
  EXPECT_EQ(criterion_from_string("C2prime"), Criterion::c2_prime);
  EXPECT_EQ(criterion_from_string("Exact"), Criterion::exact);
}

TEST(CriterionCheck, AbsoluteUsesNextScheduleValue) {
  EngineConfig cfg;
  InexactCertificate cert;
  cert.xi_norm = 0.09;
  cert.eta_norm = 0.0;
  EXPECT_TRUE(criterion_check(cert, cfg, 0).accepted);
  cert.xi_norm = 0.11;
  EXPECT_FALSE(criterion_check(cert, cfg, 0).accepted);
  // mu_{1001} = 1001^-1.001 is below 1e-3.
  cert.xi_norm = 1e-3;
  EXPECT_FALSE(criterion_check(cert, cfg, 1000).accepted);
  cert.xi_norm = 0.0;
  cert.eta_norm = 0.2;
  const Verdict v = criterion_check(cert, cfg, 0);
  EXPECT_FALSE(v.accepted);
  EXPECT_NE(v.reason.find("y-certificate"), std::string::npos);
}

TEST(CriterionCheck, RelativeScalesWithStepAndFloor) {
  EngineConfig cfg;
  cfg.criterion = Criterion::c2;
  cfg.mu = cfg.nu = {0.05, 1.001};
  InexactCertificate cert;
  cert.dx_metric = 2.0;
  cert.dy_metric = 1.0;
  cert.xi_norm = 0.099;
  cert.eta_norm = 0.049;
  EXPECT_TRUE(criterion_check(cert, cfg, 0).accepted);
  cert.eta_norm = 0.051;
  EXPECT_FALSE(criterion_check(cert, cfg, 0).accepted);
  cert.eta_floor = 0.06;
  EXPECT_TRUE(criterion_check(cert, cfg, 0).accepted);
}

TEST(CriterionCheck, ExactAndSingleSweep) {
  EngineConfig cfg = exact_config(1.0, 1.0, 10);
  InexactCertificate cert;
  cert.scale = 10.0;
  cert.xi_norm = 5e-12;
  EXPECT_TRUE(criterion_check(cert, cfg, 3).accepted);
  cert.xi_norm = 2e-11;
  EXPECT_FALSE(criterion_check(cert, cfg, 3).accepted);
  cfg.criterion = Criterion::single_sweep;
  cert.xi_norm = 1e6;
  EXPECT_TRUE(criterion_check(cert, cfg, 3).accepted);
}

TEST(BlockTarget, EvaluatesInCriterionUnits) {
  const BlockTarget abs(Criterion::c1, 0.1, 0.0, 1.0, 5, {});
  Vector cert(2);
  cert << 0.06, 0.08;
  EXPECT_TRUE(abs.accepts(Vector::Zero(2), cert));
  const BlockTarget rel(Criterion::c2, 0.1, 0.0, 0.5, 5,
                        [](const Vector& v) { return v.norm(); });
  Vector cand(2);
  cand << 3.0, 4.0;
  const auto e = rel.evaluate(cand, cert);
  EXPECT_DOUBLE_EQ(e.norm, 0.05);
  EXPECT_DOUBLE_EQ(e.metric, 5.0);
  EXPECT_TRUE(e.accepted);
}

TEST(Engine, ExactToyReachesClosedFormKkt) {
  const ToyData d = toy_data(21, 5);
  QuadraticToy toy(d.a, d.b, d.c);
  const auto cfg = exact_config(1.0, 1.618, 2000);
  const auto res = solve(toy, cfg, toy.start(), [](const IterationEvent&, const TraceRecord& r) {
    return Directive{r.h_norm < 1e-13, 0.0};
  });
  ASSERT_EQ(res.status, Status::converged);
  const auto ref = toy.solution();
  EXPECT_LE((res.state.x - ref.x).norm(), 1e-8);
  EXPECT_LE((res.state.y - ref.y).norm(), 1e-8);
  EXPECT_LE((res.state.z - ref.z).norm(), 1e-8);
}

/// Plain two-block ADMM on the toy written out in full.
IterateState reference_step(const ToyData& d, const IterateState& s, double sigma, double tau,
                            double pf, double pg) {
  IterateState n;
  n.x = (2.0 * d.a - s.z - sigma * (s.y - d.c) + pf * s.x) / (2.0 + sigma + pf);
  n.y = (2.0 * d.b - s.z - sigma * (n.x - d.c) + pg * s.y) / (2.0 + sigma + pg);
  n.z = s.z + tau * sigma * (n.x + n.y - d.c);
  return n;
}

TEST(Engine, MatchesReferenceAdmmIterateByIterate) {
  for (const auto& [pf, pg, tau] :
       {std::tuple{0.0, 0.0, 1.618}, std::tuple{0.5, -0.5, 1.0}, std::tuple{-0.9, 1.0, 1.3}}) {
    const ToyData d = toy_data(22, 4);
    QuadraticToy toy(d.a, d.b, d.c, pf, pg);
    const double sigma = 0.7;
    IterateState ref = toy.start();
    double worst = 0.0;
    int steps = 0;
    const auto res = solve(toy, exact_config(sigma, tau, 100), toy.start(), {},
                           [&](const IterationEvent& ev) {
                             ref = reference_step(d, ref, sigma, tau, pf, pg);
                             worst = std::max({worst, (ev.step.state.x - ref.x).norm(),
                                               (ev.step.state.y - ref.y).norm(),
                                               (ev.step.state.z - ref.z).norm()});
                             ++steps;
                           });
    EXPECT_EQ(steps, 100);
    EXPECT_EQ(res.status, Status::iteration_limit);
    EXPECT_LE(worst, 1e-12) << "pf " << pf << " pg " << pg;
  }
}

TEST(Engine, MultiplierUpdateIdentity) {
  const ToyData d = toy_data(23, 3);
  QuadraticToy toy(d.a, d.b, d.c, 0.0, 0.0, 0.5);
  EngineConfig cfg;
  cfg.k_max = 50;
  solve(toy, cfg, toy.start(), {}, [&](const IterationEvent& ev) {
    const Vector step = ev.step.state.z - ev.before.z;
    const Vector expect = ev.tau * ev.sigma * ev.step.h;
    EXPECT_LE((step - expect).norm(), 1e-14 * (1.0 + expect.norm()));
    EXPECT_LE((ev.step.h - toy.residual(ev.step.state.x, ev.step.state.y)).norm(), 0.0);
  });
}

TEST(Engine, ZeroIterationLimitReturnsInitialState) {
  const ToyData d = toy_data(24, 3);
  QuadraticToy toy(d.a, d.b, d.c);
  EngineConfig cfg;
  cfg.k_max = 0;
  IterateState init{d.a, d.b, d.c};
  const auto res = solve(toy, cfg, init, {});
  EXPECT_EQ(res.status, Status::iteration_limit);
  EXPECT_TRUE(res.trace.empty());
  EXPECT_EQ(res.state.x, init.x);
  EXPECT_EQ(res.state.z, init.z);
}

TEST(Engine, AbsoluteCriterionWithZeroScheduleEqualsExact) {
  const ToyData d = toy_data(25, 6);
  QuadraticToy exact_toy(d.a, d.b, d.c, 0.3, 0.2, 0.9);
  QuadraticToy c1_toy(d.a, d.b, d.c, 0.3, 0.2, 0.9);
  const auto a = solve(exact_toy, exact_config(1.0, 1.618, 60), exact_toy.start(), {});
  EngineConfig cfg = exact_config(1.0, 1.618, 60);
  cfg.criterion = Criterion::c1;
  cfg.mu = cfg.nu = {0.0, 1.001};
  const auto b = solve(c1_toy, cfg, c1_toy.start(), {});
  EXPECT_EQ(a.state.x, b.state.x);
  EXPECT_EQ(a.state.y, b.state.y);
  EXPECT_EQ(a.state.z, b.state.z);
}

TEST(Engine, SpentBudgetStillConverges) {
  const ToyData d = toy_data(26, 4);
  QuadraticToy toy(d.a, d.b, d.c, 0.0, 0.0, 0.9);
  EngineConfig cfg;
  cfg.k_max = 20000;
  const auto res = solve(toy, cfg, toy.start(), [](const IterationEvent&, const TraceRecord& r) {
    return Directive{r.k > 10 && r.h_norm < 1e-7, 0.0};
  });
  ASSERT_EQ(res.status, Status::converged);
  EXPECT_GT(res.trace.front().xi_norm, 0.0);
  const auto ref = toy.solution();
  EXPECT_LE((res.state.x - ref.x).norm(), 1e-3);
}

TEST(Engine, MonitorChangesSigma) {
  const ToyData d = toy_data(27, 2);
  QuadraticToy toy(d.a, d.b, d.c);
  const auto res = solve(toy, exact_config(1.0, 1.0, 6), toy.start(),
                         [](const IterationEvent& ev, const TraceRecord&) {
                           return Directive{false, ev.k == 2 ? 3.0 : 0.0};
                         });
  ASSERT_EQ(res.trace.size(), 6u);
  EXPECT_DOUBLE_EQ(res.trace[2].sigma, 1.0);
  EXPECT_DOUBLE_EQ(res.trace[3].sigma, 3.0);
}

TEST(Engine, ResidualSumWatchedOnlyForLargeSteps) {
  const ToyData d = toy_data(28, 3);
  QuadraticToy toy(d.a, d.b, d.c);
  auto cfg = exact_config(1.0, 1.9, 30);
  cfg.allow_large_tau = true;
  const auto large = solve(toy, cfg, toy.start(), {});
  EXPECT_GT(large.trace.back().residual_sum, 0.0);
  for (std::size_t i = 1; i < large.trace.size(); ++i)
    EXPECT_GE(large.trace[i].residual_sum, large.trace[i - 1].residual_sum);
  const auto small = solve(toy, exact_config(1.0, 1.5, 30), toy.start(), {});
  EXPECT_EQ(small.trace.back().residual_sum, 0.0);
}

TEST(Engine, InvalidConfigThrowsBeforeIterating) {
  const ToyData d = toy_data(29, 2);
  QuadraticToy toy(d.a, d.b, d.c);
  EXPECT_THROW(solve(toy, exact_config(1.0, 2.5, 5), toy.start(), {}), ValidationError);
}

/// Block problem whose x-certificate never meets any tolerance.
class StubbornProblem final : public BlockProblem {
 public:
  BlockSolution minimize_x(const IterateState& s, double, const BlockTarget& t) override {
    return {s.x, Vector::Ones(s.x.size()), t.inner_cap()};
  }
  BlockSolution minimize_y(const IterateState& s, const Vector&, double,
                           const BlockTarget&) override {
    return {s.y, Vector::Zero(s.y.size()), 1};
  }
  Vector residual(const Vector& x, const Vector& y) const override { return x + y; }
  Vector apply_y_map(const Vector& y) const override { return y; }
  double x_quadratic(const Vector& v, double, QuadWeights) const override {
    return v.squaredNorm();
  }
  double y_quadratic(const Vector& v, double, QuadWeights) const override {
    return v.squaredNorm();
  }
  double x_metric_floor(double) const override { return 1.0; }
  double y_metric_floor(double) const override { return 1.0; }
  double objective(const Vector&, const Vector&) const override { return 0.0; }
};

TEST(Engine, InnerFailureIsReported) {
  StubbornProblem p;
  EngineConfig cfg;
  cfg.inner_cap = 7;
  const Vector z = Vector::Zero(2);
  const auto res = solve(p, cfg, {z, z, z}, {});
  EXPECT_EQ(res.status, Status::inner_failure);
  EXPECT_TRUE(res.trace.empty());
  EXPECT_NE(res.message.find("x block"), std::string::npos);
  EXPECT_NE(res.message.find("after 7 sweeps"), std::string::npos);
}

}  // namespace
}  // namespace padmm::admm
