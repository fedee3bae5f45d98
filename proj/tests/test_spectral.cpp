#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "ddecoh/error.hpp"
#include "ddecoh/spectral.hpp"
#include "reference_values.hpp"

using namespace ddecoh;

namespace {

const Semicircle kUnit{1.0, 0.0, 1.0};

Tabulated reference_table() {
  return Tabulated({std::begin(ref::kTabX), std::end(ref::kTabX)},
                   {std::begin(ref::kTabY), std::end(ref::kTabY)});
}

}  // namespace

TEST(Spectral, EvalJ) {
  EXPECT_DOUBLE_EQ(eval_j(kUnit, 0.0), 2.0);
  EXPECT_EQ(eval_j(kUnit, 3.0), 0.0);
  EXPECT_NEAR(eval_j(Semicircle{0.8, 0.0, 1.0}, 1.0), 0.64 * std::sqrt(3.0), 1e-15);
  EXPECT_EQ(eval_j(kUnit, -2.0), 0.0);
}

TEST(Spectral, BandAndWeight) {
  const auto b = band(Semicircle{1.0, 0.5, 0.75});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_DOUBLE_EQ(b[0].lo, -1.0);
  EXPECT_DOUBLE_EQ(b[0].hi, 2.0);
  EXPECT_DOUBLE_EQ(total_weight(Semicircle{1.3, 0.2, 0.9}), 1.3 * 1.3 * 0.81);
  EXPECT_TRUE(is_decoupled(Semicircle{0.0, 0.0, 1.0}));
}

TEST(Spectral, SelfEnergyExamples) {
  auto se = self_energy(kUnit, 2.9);
  EXPECT_NEAR(se.delta, 0.4, 1e-15);
  EXPECT_EQ(se.j, 0.0);
  se = self_energy(Semicircle{1.7, 0.3, 0.6}, 0.3);
  EXPECT_NEAR(se.delta, 0.0, 1e-15);
  EXPECT_NEAR(se.j, 2.0 * 1.7 * 1.7 * 0.6, 1e-14);
  se = self_energy(Semicircle{2.5, 0.0, 1.0}, 1.0);
  EXPECT_NEAR(se.delta, 3.125, 1e-14);
  EXPECT_NEAR(se.j, 6.25 * std::sqrt(3.0), 1e-13);
}

TEST(Spectral, SelfEnergyMatchesIndependentQuadrature) {
  const Semicircle sc{1.3, 0.2, 0.9};
  for (std::size_t i = 0; i < std::size(ref::kSemiDeltaE); ++i) {
    const double e = ref::kSemiDeltaE[i];
    EXPECT_NEAR(self_energy(sc, e).delta, ref::kSemiDelta[i], 1e-12) << "e=" << e;
    EXPECT_NEAR(self_energy_pv(sc, e), ref::kSemiDelta[i], 1e-9) << "e=" << e;
  }
  const Tabulated tab = reference_table();
  for (std::size_t i = 0; i < std::size(ref::kTabDeltaE); ++i) {
    const double e = ref::kTabDeltaE[i];
    EXPECT_NEAR(self_energy(tab, e).delta, ref::kTabDelta[i], 1e-9) << "e=" << e;
  }
}

TEST(Spectral, ClosedFormAgreesWithPrincipalValueAtRandomPoints) {
  const Semicircle sc{1.1, -0.3, 1.2};
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> pick(-4.5, 3.9);
  int checked = 0;
  while (checked < 100) {
    const double e = pick(rng);
    const double edge = std::min(std::abs(e - (-2.7)), std::abs(e - 2.1));
    if (edge < 1e-3) continue;
    const double closed = self_energy(sc, e).delta;
    const double pv = self_energy_pv(sc, e);
    EXPECT_LT(std::abs(pv - closed), 1e-6 * std::max(std::abs(closed), 1e-3)) << "e=" << e;
    ++checked;
  }
}

TEST(Spectral, DerivativeClosedFormAndFiniteDifference) {
  EXPECT_NEAR(self_energy_derivative(kUnit, 2.9), 0.5 * (1.0 - 2.9 / 2.1), 1e-14);
  EXPECT_EQ(self_energy_derivative(Semicircle{0.0, 0.0, 1.0}, 3.0), 0.0);

  const Semicircle strong{2.5, 0.0, 1.0};
  const double e = -2.5415;
  const double step = 1e-4;
  const double fd = (self_energy(strong, e + step).delta - self_energy(strong, e - step).delta) / (2 * step);
  const double d = self_energy_derivative(strong, e);
  EXPECT_LT(std::abs(d - fd), 1e-6 * std::abs(d));

  EXPECT_THROW(self_energy_derivative(kUnit, 2.0 + 1e-8), Error);
}

TEST(Spectral, BoundStateExamples) {
  auto b = find_bound_states(kUnit, 2.5);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].energy, 2.9, 1e-12);
  EXPECT_NEAR(b[0].amplitude, 0.84, 1e-10);

  EXPECT_TRUE(find_bound_states(Semicircle{0.8, 0.0, 1.0}, 1.0).empty());

  b = find_bound_states(Semicircle{2.5, 0.0, 1.0}, 0.5);
  ASSERT_EQ(b.size(), 2u);
  const double disc = std::sqrt(2.125 * 2.125 + 4 * 5.25 * 39.3125);
  EXPECT_NEAR(b[0].energy, (2.125 - disc) / 10.5, 1e-10);
  EXPECT_NEAR(b[1].energy, (2.125 + disc) / 10.5, 1e-10);
}

TEST(Spectral, BoundStatesSatisfyDefiningEquation) {
  for (double eta : {0.3, 1.0, 2.5}) {
    for (double eon : {-3.0, -1.0, 0.0, 0.7, 2.2, 4.0}) {
      const Semicircle sc{eta, 0.1, 0.8};
      for (const auto& s : find_bound_states(sc, eon)) {
        EXPECT_LE(std::abs(s.energy - eon - self_energy(sc, s.energy).delta), 1e-10);
        EXPECT_GT(s.amplitude, 0.0);
        EXPECT_LE(s.amplitude, 1.0);
        EXPECT_FALSE(band(sc)[0].contains(s.energy));
      }
    }
  }
}

TEST(Spectral, TabulatedBoundState) {
  const auto b = find_bound_states(reference_table(), 2.4);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].energy, ref::kTabBound[0], 1e-9);
  EXPECT_NEAR(b[0].amplitude, ref::kTabBound[1], 1e-6);
}

TEST(Spectral, DecoupledLevel) {
  const auto b = find_bound_states(Semicircle{0.0, 0.0, 1.0}, 0.3);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].energy, 0.3);
  EXPECT_EQ(b[0].amplitude, 1.0);
  const auto s = spectrum(Semicircle{0.0, 0.0, 1.0}, 0.3);
  EXPECT_EQ(s.band_part(0.1), 0.0);
  EXPECT_DOUBLE_EQ(s.sum_rule(), 1.0);
}

TEST(Spectral, MonotoneBoundStateCount) {
  // Past the edge value eps_edge - Delta(edge) a bound state must appear.
  for (double eta : {0.5, 1.0, 1.6}) {
    const Semicircle sc{eta, 0.0, 1.0};
    const double upper = 2.0 - self_energy(sc, 2.0 + 1e-9).delta;
    for (double extra : {0.01, 0.3, 2.0}) {
      const auto b = find_bound_states(sc, upper + extra);
      ASSERT_FALSE(b.empty()) << eta << " " << extra;
      EXPECT_GT(b.back().energy, 2.0);
      const auto lower = find_bound_states(sc, -upper - extra);
      ASSERT_FALSE(lower.empty());
      EXPECT_LT(lower.front().energy, -2.0);
    }
  }
}

TEST(Spectral, SumRules) {
  for (auto [eta, eon] : {std::pair{1.0, 2.5}, {2.5, 0.5}, {0.8, 1.0}}) {
    const auto s = spectrum(Semicircle{eta, 0.0, 1.0}, eon);
    EXPECT_NEAR(s.sum_rule(), 1.0, 1e-6) << eta << " " << eon;
    EXPECT_GE(s.band_part(0.4), 0.0);
  }
  EXPECT_NEAR(spectrum(reference_table(), 0.3).sum_rule(), 1.0, 1e-6);
}

TEST(Spectral, U0AgainstIndependentSpectralIntegral) {
  const auto grid = TimeGrid::span(0.0, 40.0, 0.5);
  const auto u0 = compute_u0(kUnit, 2.5, grid);
  EXPECT_EQ(u0.values[0], cplx(1.0, 0.0));
  for (std::size_t i = 0; i < std::size(ref::kU0Time); ++i) {
    const cplx u = u0.values[u0.index_at(ref::kU0Time[i])];
    EXPECT_NEAR(u.real(), ref::kU0Re[i], 1e-9) << "t=" << ref::kU0Time[i];
    EXPECT_NEAR(u.imag(), ref::kU0Im[i], 1e-9) << "t=" << ref::kU0Time[i];
  }
}

TEST(Spectral, U0PlateauAndDecay) {
  const auto plateau = compute_u0(kUnit, 2.5, TimeGrid::span(0.0, 200.0, 1.0));
  EXPECT_NEAR(std::abs(plateau.values.back()), 0.84, 5e-3);
  const auto none = compute_u0(Semicircle{0.8, 0.0, 1.0}, 1.0, TimeGrid::span(0.0, 100.0, 1.0));
  EXPECT_LT(std::abs(none.values.back()), 0.02);
}

TEST(Spectral, TabulatedLoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "ddecoh_tab_test.dat";
  {
    std::ofstream os(path);
    os << "# energy J\n-1 0\n0 1.5\n1 0\n";
  }
  const auto t = Tabulated::load(path);
  EXPECT_DOUBLE_EQ(t(0.5), 0.75);
  EXPECT_EQ(t(1.5), 0.0);
  std::filesystem::remove(path);
  EXPECT_THROW(Tabulated::load(path), Error);
  EXPECT_THROW(Tabulated({0.0, 1.0}, {-1.0, 0.0}), Error);
}
