#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "ddecoh/comb.hpp"
#include "ddecoh/error.hpp"
#include "ddecoh/kernel.hpp"
#include "ddecoh/oracle.hpp"
#include "ddecoh/spectral.hpp"
#include "ddecoh/volterra.hpp"

using namespace ddecoh;

namespace {
const Semicircle kUnit{1.0, 0.0, 1.0};
}

TEST(Oracle, Discretization) {
  const auto m = discretize(kUnit, 2000, 0.0);
  EXPECT_NEAR(m.coupling_weight(), 1.0, 1e-3);
  for (std::size_t i = 1; i < m.n_modes(); ++i) ASSERT_LT(m.eps_k[i - 1], m.eps_k[i]);
  EXPECT_GT(m.eps_k.front(), -2.0);
  EXPECT_LT(m.eps_k.back(), 2.0);

  const auto two = discretize(Semicircle{1.0, 0.3, 1.0}, 2, 0.0);
  ASSERT_EQ(two.n_modes(), 2u);
  EXPECT_DOUBLE_EQ(two.eps_k[0], 0.3 - 1.0);
  EXPECT_DOUBLE_EQ(two.eps_k[1], 0.3 + 1.0);
  EXPECT_NEAR(recurrence_time(m), 2.0 * std::numbers::pi / (4.0 / 2000), 1e-6);
}

TEST(Oracle, IsolatedLevelsConvergeToBoundStates) {
  const Semicircle sc{2.5, 0.0, 1.0};
  const auto exact = find_bound_states(sc, 0.5);
  double prev = 0.0;
  for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
    const auto lv = isolated_levels(discretize(sc, n, 0.0), 0.5);
    ASSERT_EQ(lv.size(), exact.size()) << n;
    double err = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i) err = std::max(err, std::abs(lv[i] - exact[i].energy));
    EXPECT_LT(err, 5.0 / static_cast<double>(n));
    if (prev > 0.0) EXPECT_LT(err, prev);
    prev = err;
  }
}

TEST(Oracle, IsolatedLevelsMatchDenseDiagonalization) {
  const auto m = discretize(kUnit, 200, 0.0);
  const double eps_on = 2.5;
  const int n = static_cast<int>(m.n_modes()) + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  h(0, 0) = eps_on;
  for (int k = 1; k < n; ++k) {
    h(k, k) = m.eps_k[static_cast<std::size_t>(k - 1)];
    h(0, k) = h(k, 0) = m.v_k[static_cast<std::size_t>(k - 1)];
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues();
  const auto lv = isolated_levels(m, eps_on);
  ASSERT_EQ(lv.size(), 1u);
  EXPECT_NEAR(lv[0], ev(n - 1), 1e-10);
  EXPECT_LT(ev(n - 2), 2.0);
}

TEST(Oracle, UndrivenPlateauAndSpectralForm) {
  const auto m = discretize(kUnit, 2000, 0.0);
  const auto g = TimeGrid::span(0.0, 50.0, 0.005);
  const auto run = propagate(m, DrivingField::constant(2.5), g);
  EXPECT_NEAR(std::abs(run.trace.values.back()), 0.84, 0.01);
  EXPECT_LE(compare(run.trace, compute_u0(kUnit, 2.5, g)), 1e-3);
  EXPECT_LT(run.max_norm_defect, 1e-8);
}

TEST(Oracle, ZeroCouplingKeepsModulus) {
  const auto m = discretize(Semicircle{0.0, 0.0, 1.0}, 50, 0.0);
  const auto run = propagate(m, {1.0, 1.25, Sine{0.5}}, TimeGrid::span(0.0, 20.0, 0.01));
  for (const auto& u : run.trace.values) ASSERT_NEAR(std::abs(u), 1.0, 1e-12);
}

TEST(Oracle, WeakSineContrastWithinFifty) {
  const auto m = discretize(kUnit, 2000, 0.0);
  const auto g = TimeGrid::span(0.0, 50.0, 0.005);
  const auto a = propagate(m, {2.5, 1.25, Sine{0.5}}, g);
  const auto b = propagate(m, {2.5, 1.32, Sine{0.5}}, g);
  EXPECT_GT(survival_metric(a.trace, {40.0, 50.0}), 0.3);
  // Visible decay: T = 1.32 loses weight that T = 1.25 keeps.
  EXPECT_LT(std::abs(b.trace.values.back()), std::abs(a.trace.values.back()) - 0.02);
}

TEST(Oracle, AgreesWithVolterraNearResonance) {
  const DrivingField d{2.5, 1.32, Sine{0.5}};
  const auto g = TimeGrid::span(0.0, 50.0, 0.005);
  const auto v = evolve(MemoryKernel::analytic(kUnit), 0.0, d, g);
  const auto o = propagate(discretize(kUnit, 2000, 0.0), d, g);
  EXPECT_LE(compare(v, o.trace), 1e-3);
}

TEST(Oracle, FiniteSizeScaling) {
  // The band edges vanish like a square root, so the midpoint lattice converges
  // as N^(-3/2): an eightfold drop from N=500 to N=2000.
  const DrivingField d = DrivingField::constant(2.5);
  const auto g = TimeGrid::span(0.0, 50.0, 0.005);
  const auto exact = compute_u0(kUnit, 2.5, g);
  const double e500 = compare(propagate(discretize(kUnit, 500, 0.0), d, g).trace, exact);
  const double e2000 = compare(propagate(discretize(kUnit, 2000, 0.0), d, g).trace, exact);
  EXPECT_GT(e500 / e2000, 4.0);
  EXPECT_NEAR(e500 / e2000, 8.0, 1.0);
}

TEST(Oracle, CompareChecksGrids) {
  const auto m = discretize(kUnit, 20, 0.0);
  const auto a = propagate(m, DrivingField::constant(0.0), TimeGrid::span(0.0, 1.0, 0.01));
  const auto b = propagate(m, DrivingField::constant(0.0), TimeGrid::span(0.0, 1.0, 0.02));
  EXPECT_EQ(compare(a.trace, a.trace), 0.0);
  try {
    compare(a.trace, b.trace);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridMismatch);
  }
}

TEST(Oracle, SquareSwitchesInsideStepsAreExact) {
  // 0.023 does not divide T/2 = 0.5, so steps straddle switch points. Split at
  // the switches, every segment has a constant Hamiltonian and substeps change
  // nothing beyond round-off.
  const auto m = discretize(kUnit, 400, 0.0);
  const DrivingField d{2.5, 1.0, Square{0.5}};
  const auto g = TimeGrid::span(0.0, 5.98, 0.023);
  OracleOptions fine;
  fine.substeps = 16;
  const auto ref = propagate(m, d, g, fine).trace;
  EXPECT_LT(compare(propagate(m, d, g).trace, ref), 1e-10);
  // A smooth drive of the same size does depend on the step.
  const DrivingField sine{2.5, 1.0, Sine{0.5}};
  const auto sref = propagate(m, sine, g, fine).trace;
  OracleOptions half;
  half.substeps = 2;
  const double e1 = compare(propagate(m, sine, g).trace, sref);
  const double e2 = compare(propagate(m, sine, g, half).trace, sref);
  EXPECT_GT(e1 / e2, 3.5);
}
