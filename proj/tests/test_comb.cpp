#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "ddecoh/comb.hpp"
#include "ddecoh/error.hpp"

using namespace ddecoh;

namespace {

const std::vector<Interval> kBand{{-2.0, 2.0}};

CombReport report(std::vector<double> energies, const DrivingField& d, CombOptions opt = {}) {
  std::vector<BoundState> b;
  for (double e : energies) b.push_back({e, 0.8});
  return comb_report(b, d, kBand, opt);
}

PropagatorTrace tone(std::vector<std::pair<double, double>> lines, double t_max, double h) {
  PropagatorTrace tr{TimeGrid::span(0.0, t_max, h), {}};
  for (std::size_t k = 0; k < tr.grid.size(); ++k) {
    cplx u{};
    for (auto [z, e] : lines) u += z * std::polar(1.0, -e * tr.time(k));
    tr.values.push_back(u);
  }
  return tr;
}

}  // namespace

TEST(Comb, OneStateExamples) {
  CombOptions ten;
  ten.n_max = 10;
  auto r = report({2.9}, {0.0, 1.25, Sine{0.5}}, ten);
  ASSERT_EQ(r.states.size(), 1u);
  EXPECT_EQ(r.states[0].prediction, Prediction::Survives);
  EXPECT_TRUE(r.states[0].overlaps.empty());
  EXPECT_FALSE(r.states[0].min_order);

  r = report({2.9}, {0.0, 1.32, Sine{0.5}});
  EXPECT_EQ(r.states[0].prediction, Prediction::Dissipates);
  ASSERT_EQ(r.states[0].overlaps.size(), 1u);
  EXPECT_EQ(r.states[0].overlaps[0].n, 1);
  EXPECT_EQ(r.states[0].overlaps[0].sign, -1);
  EXPECT_NEAR(r.states[0].overlaps[0].energy, 2.9 - 2 * std::numbers::pi / 1.32, 1e-14);
  EXPECT_EQ(r.states[0].min_order, 1);

  r = report({2.9}, {0.0, 10.0, Sine{0.5}});
  EXPECT_EQ(r.states[0].min_order, 2);
  std::vector<int> ns;
  for (const auto& o : r.states[0].overlaps) {
    EXPECT_EQ(o.sign, -1);
    EXPECT_EQ(o.order, o.n);
    ns.push_back(o.n);
  }
  EXPECT_EQ(ns, (std::vector<int>{2, 3, 4, 5, 6, 7}));
}

TEST(Comb, SquareWaveBridgesAtFirstOrder) {
  const auto r = report({2.9}, {0.0, 10.0, Square{0.5}});
  EXPECT_EQ(r.states[0].min_harmonic, 2);
  EXPECT_EQ(r.states[0].min_order, 1);
  for (const auto& o : r.states[0].overlaps) EXPECT_EQ(o.order, o.n % 2 ? 1 : 2);
}

TEST(Comb, TwoStatesIndependent) {
  const auto r = report({-2.5415, 2.9463}, {0.0, 1.32, Sine{0.5}});
  ASSERT_EQ(r.states.size(), 2u);
  EXPECT_EQ(r.states[0].prediction, Prediction::Survives);
  EXPECT_EQ(r.states[1].prediction, Prediction::Dissipates);
}

TEST(Comb, OverlapsAreExactlyTheShiftsInsideTheBand) {
  const DrivingField d{0.0, 3.7, Sine{0.2}};
  CombOptions opt;
  opt.n_max = 9;
  const auto r = report({-2.31}, d, opt);
  std::size_t expected = 0;
  for (int n = 1; n <= 9; ++n) {
    for (int s : {-1, 1}) expected += kBand[0].contains(-2.31 + s * n * d.frequency());
  }
  EXPECT_EQ(r.states[0].overlaps.size(), expected);
  for (const auto& o : r.states[0].overlaps) EXPECT_TRUE(kBand[0].contains(o.energy));
}

TEST(Comb, GaugeShiftInvariance) {
  const DrivingField d{0.0, 10.0, Sine{0.5}};
  const auto a = report({2.9, -2.2}, d);
  const double c = 1.7;
  const std::vector<Interval> shifted{{-2.0 + c, 2.0 + c}};
  const auto b = comb_report(std::vector<BoundState>{{2.9 + c, 0.8}, {-2.2 + c, 0.8}}, d, shifted, {});
  ASSERT_EQ(a.states.size(), b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    EXPECT_EQ(a.states[i].prediction, b.states[i].prediction);
    EXPECT_EQ(a.states[i].min_order, b.states[i].min_order);
    EXPECT_EQ(a.states[i].overlaps.size(), b.states[i].overlaps.size());
  }
}

TEST(Comb, Reliability) {
  EXPECT_EQ(report({2.9}, {0.0, 1.32, Sine{0.5}}).reliability, Reliability::WeakDrivingValid);
  EXPECT_EQ(report({2.9}, {0.0, 1.32, Sine{5.0}}).reliability, Reliability::StrongDrivingUnreliable);
  CombOptions tight;
  tight.strong_threshold = 0.45;
  EXPECT_EQ(report({2.9}, {0.0, 1.32, Sine{0.5}}, tight).reliability, Reliability::StrongDrivingUnreliable);
  EXPECT_DOUBLE_EQ(report({2.9, -2.3}, {0.0, 1.0, Sine{0.1}}).strong_threshold, 2.3 - 2.0);
}

TEST(Comb, EmptyAndStatic) {
  const auto r = report({}, {0.0, 1.32, Sine{0.5}});
  EXPECT_TRUE(r.states.empty());
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_TRUE(j["states"].empty());
  EXPECT_EQ(report({2.9}, DrivingField::constant(0.0)).states[0].prediction, Prediction::Survives);
  EXPECT_THROW(report({2.9}, {0.0, 1.0, Sine{0.5}}, CombOptions{0, {}}), Error);
}

TEST(Comb, JsonFields) {
  const auto j = nlohmann::json::parse(to_json(report({2.9}, {0.0, 1.32, Sine{0.5}})));
  EXPECT_EQ(j["reliability"], "weak-driving-valid");
  EXPECT_EQ(j["states"][0]["prediction"], "dissipates");
  EXPECT_EQ(j["states"][0]["min_order"], 1);
  EXPECT_EQ(j["states"][0]["overlaps"][0]["n"], 1);
}

TEST(Comb, SurvivalMetric) {
  const auto tr = tone({{0.84, 2.9}}, 20.0, 0.01);
  EXPECT_NEAR(survival_metric(tr, {5.0, 15.0}), 0.84, 1e-14);
  try {
    survival_metric(tr, {15.0, 25.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowOutOfRange);
  }
  EXPECT_THROW(survival_metric(tr, {5.0, 5.0}), Error);
}

TEST(Comb, SpectralPeaks) {
  const double h = 0.005;
  auto peaks = late_window_peaks(tone({{0.84, 2.9}}, 200.0, h), {150.0, 200.0});
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_NEAR(peaks[0].frequency, 2.9, 2 * std::numbers::pi / 50.0 / 8.0);
  EXPECT_NEAR(peaks[0].amplitude, 0.84, 0.01);

  peaks = late_window_peaks(tone({{0.45, 2.9463}, {0.34, -2.5415}}, 200.0, h), {150.0, 200.0});
  ASSERT_EQ(peaks.size(), 2u);
  EXPECT_NEAR(peaks[0].frequency, 2.9463, 0.01);
  EXPECT_NEAR(peaks[1].frequency, -2.5415, 0.01);
  EXPECT_NEAR(peaks[1].weight, 0.34 / 0.45, 0.01);

  EXPECT_TRUE(late_window_peaks(tone({{1e-3, 1.0}}, 200.0, h), {150.0, 200.0}).empty());
  EXPECT_THROW(late_window_peaks(tone({{1.0, 1.0}}, 100.0, h), {150.0, 200.0}), Error);
}
