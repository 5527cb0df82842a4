#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "liemax/flows.hpp"
#include "support.hpp"

using namespace liemax;
using namespace liemax::testing;

namespace {

constexpr double kPi = std::numbers::pi;

// Heisenberg sub-Riemannian extremal from (identity, (1, 0, 1)): the covector rotates with unit
// rate, x = sin t, y = 1 - cos t and the (0,2) entry integrates x dy.
Mat heisenberg_unit_circle(double t) {
  Mat g = Mat::Identity(3, 3);
  g(0, 1) = std::sin(t);
  g(1, 2) = 1 - std::cos(t);
  g(0, 2) = t / 2 - std::sin(2 * t) / 4;
  return g;
}

FlowConfig rk4(double step) {
  FlowConfig c;
  c.method = Method::rk4_fixed;
  c.max_step = step;
  return c;
}

struct Example {
  std::string group;
  std::string hamiltonian;
};

const std::vector<Example>& examples() {
  static const std::vector<Example> e{{"heisenberg3", "sr"}, {"se2", "sr"}, {"sh2", "sr"},
                                      {"so3", "sr"},         {"so3", "killing"}, {"engel4", "sr"}};
  return e;
}

}  // namespace

TEST(SrHamiltonian, ValueAndDifferential) {
  const auto& h = group("heisenberg3").hamiltonian("sr");
  EXPECT_DOUBLE_EQ(h(cov({1, 2, 3})), 2.5);
  EXPECT_EQ(h.differential(cov({1, 2, 3})).coords, vec({1, 2, 0}).coords);
  EXPECT_EQ(h.kind(), HamiltonianKind::sub_riemannian);
  EXPECT_LE(h.differential_check(), 1e-6);
}

TEST(SrHamiltonian, WeightsAndFrame) {
  const auto& alg = group("se2").alg();
  const auto h = sr_hamiltonian(alg, {vec({1, 1, 0}), vec({0, 0, 1})}, {2.0, 0.5});
  // H = (2 (p1 + p2)^2 + 0.5 p3^2) / 2
  const auto p = cov({0.3, -1.1, 2.0});
  EXPECT_NEAR(h(p), (2 * 0.64 + 0.5 * 4.0) / 2, 1e-15);
  EXPECT_LE(max_abs(h.differential(p).coords - vec({2 * -0.8, 2 * -0.8, 0.5 * 2.0}).coords), 1e-15);
}

TEST(SrHamiltonian, BadFramesAreRejected) {
  const auto& alg = group("se2").alg();
  EXPECT_THROW(sr_hamiltonian(alg, {vec({1, 0, 0}), vec({2, 0, 0})}), ArgumentError);
  EXPECT_THROW(sr_hamiltonian(alg, {}), ArgumentError);
  EXPECT_THROW(sr_hamiltonian(alg, {vec({1, 0, 0})}, {-1.0}), ArgumentError);
  EXPECT_THROW(sr_hamiltonian(alg, {vec({1, 0})}), ArgumentError);
}

TEST(CustomHamiltonian, WrongDifferentialFailsValidation) {
  auto value = [](const Covector& p) { return p.coords.squaredNorm(); };
  auto wrong = [](const Covector& p) { return AlgebraVector(p.coords); };
  EXPECT_THROW(HamiltonianSpec("bad", 3, value, wrong), ValidationError);
  const HamiltonianSpec fd("fd", 3, value);
  EXPECT_LE(max_abs(fd.differential(cov({1, -2, 0.5})).coords - vec({2, -4, 1}).coords), 1e-6);
}

TEST(Killing, FormOfSo3) {
  EXPECT_LE((killing_form(group("so3").alg()) + 2 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Killing, NonCompactAlgebrasAreRejected) {
  for (const std::string name : {"se2", "sh2", "heisenberg3", "engel4"})
    EXPECT_THROW(killing_hamiltonian(group(name).alg()), DomainError) << name;
}

TEST(Killing, So3HamiltonianIsPositive) {
  const auto h = killing_hamiltonian(group("so3").alg());
  std::mt19937_64 rng(31);
  for (int s = 0; s < 100; ++s) {
    const auto p = random_covector(rng, 3);
    // K = -2 I, so the normalized form gives |p|^2 / 4
    EXPECT_NEAR(h(p), p.coords.squaredNorm() / 4, 1e-14);
    EXPECT_GT(h(p), 0.0);
  }
}

TEST(ComposeDual, MatchesPullback) {
  const auto& h = group("se2").hamiltonian("sr");
  Mat m(3, 3);
  m << 0, 1, 0, 1, 0, 0, 0, 0, -1;
  const auto hs = compose_dual(h, LinearMap(m));
  std::mt19937_64 rng(32);
  for (int s = 0; s < 50; ++s) {
    const auto q = random_covector(rng, 3);
    EXPECT_NEAR(hs(q), h(Covector(m.transpose() * q.coords)), 1e-15);
  }
  EXPECT_LE(hs.differential_check(), 1e-6);
}

TEST(Integrator, ExponentialGrowth) {
  const OdeRhs f = [](double, const Vec& y, Vec& d) { d = y; };
  const Vec y0 = Vec::Ones(1);
  EXPECT_NEAR(integrate(f, 0, y0, 1, {}).final_state()[0], std::exp(1.0), 1e-9);
  EXPECT_NEAR(integrate(f, 0, y0, -1, {}).final_state()[0], std::exp(-1.0), 1e-10);
  EXPECT_NEAR(integrate(f, 0, y0, 1, rk4(1e-3)).final_state()[0], std::exp(1.0), 1e-11);
}

TEST(Integrator, BlowUpReportsLastGoodTime) {
  const OdeRhs f = [](double, const Vec& y, Vec& d) { d = y.cwiseProduct(y); };
  try {
    integrate(f, 0, Vec::Ones(1), 2, {});
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_LE(e.last_good_time(), 1.0);
    EXPECT_GT(e.last_good_time(), 0.9);
  }
}

TEST(Integrator, DenseOutputInterpolates) {
  const OdeRhs f = [](double t, const Vec&, Vec& d) { d = Vec::Constant(1, std::cos(t)); };
  const auto sol = integrate(f, 0, Vec::Zero(1), 5, {}, true);
  for (double t = 0; t <= 5; t += 0.37) EXPECT_NEAR(sol.interpolate(t)[0], std::sin(t), 1e-7);
}

TEST(Integrator, ConfigValidation) {
  const OdeRhs f = [](double, const Vec& y, Vec& d) { d = y; };
  FlowConfig c;
  c.tol = 0;
  EXPECT_THROW(integrate(f, 0, Vec::Ones(1), 1, c), ArgumentError);
  c = {};
  c.max_step = -1;
  EXPECT_THROW(c.validate(), ArgumentError);
  c = {};
  c.max_time = 10;
  EXPECT_THROW(integrate(f, 0, Vec::Ones(1), 11, c), ArgumentError);
}

TEST(VerticalFlow, HeisenbergClosedForm) {
  const auto& b = group("heisenberg3");
  const auto p = vertical_flow(b.alg(), b.hamiltonian("sr"), cov({1, 0, 1}), kPi / 2);
  EXPECT_LE(distance(p, cov({0, 1, 1})), 1e-9);
  for (double t : {0.3, 1.7, 4.0}) {
    const auto q = vertical_flow(b.alg(), b.hamiltonian("sr"), cov({1, 0, 2}), t);
    EXPECT_LE(distance(q, cov({std::cos(2 * t), std::sin(2 * t), 2})), 1e-9);
  }
}

TEST(VerticalFlow, BackwardUndoesForward) {
  std::mt19937_64 rng(33);
  for (const auto& ex : examples()) {
    const auto& b = group(ex.group);
    const auto& h = b.hamiltonian(ex.hamiltonian);
    const auto p = random_covector(rng, b.alg().dim());
    const auto q = vertical_flow(b.alg(), h, p, 2.5);
    EXPECT_LE(distance(vertical_flow(b.alg(), h, q, -2.5), p), 1e-8) << ex.group;
  }
}

TEST(VerticalFlow, So3CasimirAndEnergyConserved) {
  const auto& b = group("so3");
  std::mt19937_64 rng(34);
  for (int s = 0; s < 10; ++s) {
    const auto p = random_covector(rng, 3);
    const auto q = vertical_flow(b.alg(), b.hamiltonian("sr"), p, 7.0);
    EXPECT_NEAR(q.coords.norm(), p.coords.norm(), 1e-9);
    EXPECT_NEAR(b.hamiltonian("sr")(q), b.hamiltonian("sr")(p), 1e-9);
  }
}

TEST(LeftFlow, StraightLineIsOneParameterSubgroup) {
  const auto& b = group("heisenberg3");
  const auto g = exp_map(b.alg(), b.hamiltonian("sr"), cov({1, 0, 0}), 2.0);
  EXPECT_LE(distance(g, group_exp(b.alg(), vec({2, 0, 0}))), 1e-10);
}

TEST(LeftFlow, HeisenbergCircleClosedForm) {
  const auto& b = group("heisenberg3");
  for (double t : {0.5, kPi, 2 * kPi, 9.0}) {
    const auto g = exp_map(b.alg(), b.hamiltonian("sr"), cov({1, 0, 1}), t);
    EXPECT_LE((g.matrix - heisenberg_unit_circle(t)).cwiseAbs().maxCoeff(), 1e-8) << t;
  }
}

TEST(LeftFlow, AgreesWithRefinedRk4) {
  const auto& b = group("heisenberg3");
  const auto fine = exp_map(b.alg(), b.hamiltonian("sr"), cov({1, 0, 1}), 2 * kPi, rk4(1e-3));
  const auto adaptive = exp_map(b.alg(), b.hamiltonian("sr"), cov({1, 0, 1}), 2 * kPi);
  EXPECT_LE(distance(fine, adaptive), 1e-8);
}

TEST(LeftFlow, CompositionOfTimes) {
  std::mt19937_64 rng(35);
  for (const auto& ex : examples()) {
    const auto& b = group(ex.group);
    const auto& h = b.hamiltonian(ex.hamiltonian);
    const auto p = random_covector(rng, b.alg().dim());
    const auto mid = left_flow(b.alg(), h, p, 1.3);
    const auto two_step = left_flow_from(b.alg(), h, mid, 2.1);
    const auto one_step = left_flow(b.alg(), h, p, 3.4);
    EXPECT_LE(compare_cotangent(b.alg(), two_step, one_step), 1e-8) << ex.group;
  }
}

TEST(LeftFlow, AdaptiveAgreesWithFixedStep) {
  std::mt19937_64 rng(36);
  for (const auto& ex : examples()) {
    const auto& b = group(ex.group);
    const auto& h = b.hamiltonian(ex.hamiltonian);
    for (int s = 0; s < 3; ++s) {
      const auto p = random_covector(rng, b.alg().dim());
      const auto a = left_flow(b.alg(), h, p, 3.0);
      const auto f = left_flow(b.alg(), h, p, 3.0, rk4(1e-4));
      EXPECT_LE(compare_cotangent(b.alg(), a, f), 1e-7) << ex.group;
    }
  }
}

TEST(LeftFlow, ProjectionMatchesFullFlowAndCovectorMatchesVertical) {
  std::mt19937_64 rng(37);
  for (const auto& ex : examples()) {
    const auto& b = group(ex.group);
    const auto& h = b.hamiltonian(ex.hamiltonian);
    const auto p = random_covector(rng, b.alg().dim());
    const auto full = left_flow(b.alg(), h, p, 2.2);
    EXPECT_LE(distance(exp_map(b.alg(), h, p, 2.2), full.g()), 1e-8) << ex.group;
    EXPECT_LE(distance(vertical_flow(b.alg(), h, p, 2.2), full.covector()), 1e-8) << ex.group;
  }
}

TEST(LeftFlow, EnergyAndMomentumConserved) {
  std::mt19937_64 rng(38);
  const FlowConfig cfg;
  for (const auto& ex : examples()) {
    const auto& b = group(ex.group);
    const auto& h = b.hamiltonian(ex.hamiltonian);
    const auto p = random_covector(rng, b.alg().dim());
    for (double t : {1.0, 5.0, 20.0}) {
      const auto lam = left_flow(b.alg(), h, p, t);
      EXPECT_LE(std::abs(h(lam.covector()) - h(p)), 10 * cfg.tol * (1 + std::abs(h(p)))) << ex.group << " " << t;
      const auto m = momentum_maps(b.alg(), lam);
      EXPECT_LE(distance(m.left, p), 1e-7) << ex.group << " " << t;
    }
  }
}

TEST(LeftFlow, ExpRequiresPositiveTime) {
  const auto& b = group("se2");
  EXPECT_THROW(exp_map(b.alg(), b.hamiltonian("sr"), cov({1, 0, 0}), 0.0), DomainError);
  EXPECT_THROW(left_flow(b.alg(), b.hamiltonian("sr"), cov({1, 0}), 1.0), ArgumentError);
}

TEST(RightFlow, MirrorsLeftFlowUnderInversion) {
  // For even H, (g, q) = (g_L^-1, -p_L) solves the right-trivialized system.
  std::mt19937_64 rng(39);
  for (const auto& ex : examples()) {
    const auto& b = group(ex.group);
    const auto& h = b.hamiltonian(ex.hamiltonian);
    const auto p = random_covector(rng, b.alg().dim());
    const auto left = left_flow(b.alg(), h, p, 2.7);
    const auto right = right_flow(b.alg(), h, Covector(-p.coords), 2.7);
    EXPECT_LE(distance(right.g(), left.g().inverse()), 1e-8) << ex.group;
    EXPECT_LE(max_abs(right.covector().coords + left.covector().coords), 1e-8) << ex.group;
    EXPECT_EQ(right.side(), Side::right);
    EXPECT_LE(distance(momentum_maps(b.alg(), right).right, Covector(-p.coords)), 1e-7) << ex.group;
  }
}

TEST(DenseFlow, EvaluateMatchesDirectIntegration) {
  const auto& b = group("se2");
  const auto& h = b.hamiltonian("sr");
  const auto p = cov({0.7, 0.1, 0.4});
  const DenseFlow flow(b.alg(), h, p, 6.0, {});
  for (double t : {0.0, 0.01, 1.234, 3.0, 5.999, 6.0}) {
    const auto direct = t == 0.0 ? CotangentPoint(GroupPoint::identity(3), p, Side::left) : left_flow(b.alg(), h, p, t);
    EXPECT_LE(compare_cotangent(b.alg(), flow.evaluate(t), direct), 1e-9) << t;
    EXPECT_LE(compare_cotangent(b.alg(), flow.interpolate(t), direct), 1e-6) << t;
  }
}

TEST(Trajectory, SamplesEndExactlyAtFinalTime) {
  const auto& b = group("heisenberg3");
  const DenseFlow flow(b.alg(), b.hamiltonian("sr"), cov({1, 0, 0}), 0.25, {});
  const auto traj = sample_trajectory(flow, 0.1);
  ASSERT_EQ(traj.samples.size(), 4u);
  EXPECT_DOUBLE_EQ(traj.samples.front().first, 0.0);
  EXPECT_NEAR(traj.samples[2].first, 0.2, 1e-15);
  EXPECT_EQ(traj.samples.back().first, 0.25);
  EXPECT_THROW(sample_trajectory(flow, 0.0), ArgumentError);
}

TEST(Trajectory, CsvLayout) {
  const auto& b = group("heisenberg3");
  const DenseFlow flow(b.alg(), b.hamiltonian("sr"), cov({1, 0, 0}), 2.0, {});
  std::ostringstream os;
  write_trajectory_csv(os, sample_trajectory(flow, 1.0));
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header, "t,p_1,p_2,p_3,g_11,g_12,g_13,g_21,g_22,g_23,g_31,g_32,g_33");
  int rows = 0;
  std::string last;
  while (std::getline(in, row))
    if (!row.empty()) {
      ++rows;
      last = row;
    }
  EXPECT_EQ(rows, 3);
  std::vector<double> values;
  std::stringstream ls(last);
  std::string cell;
  while (std::getline(ls, cell, ',')) values.push_back(std::stod(cell));
  ASSERT_EQ(values.size(), 13u);
  EXPECT_EQ(values[0], 2.0);
  EXPECT_NEAR(values[5], 2.0, 1e-8);  // g_12 = x
}

TEST(Trajectory, JsonHasOneEntryPerSample) {
  const auto& b = group("so3");
  const DenseFlow flow(b.alg(), b.hamiltonian("sr"), cov({1, 0, 0.5}), 1.0, {});
  const auto j = trajectory_json(sample_trajectory(flow, 0.5));
  ASSERT_TRUE(j.contains("samples"));
  EXPECT_EQ(j["samples"].size(), 3u);
}
