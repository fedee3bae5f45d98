#include <gtest/gtest.h>

#include <cmath>

#include "ddecoh/error.hpp"
#include "ddecoh/kernel.hpp"
#include "reference_values.hpp"

using namespace ddecoh;

TEST(Kernel, ZeroLagIsTotalWeight) {
  const auto k = MemoryKernel::analytic(Semicircle{1.0, 0.0, 1.0});
  EXPECT_EQ(k(0.0), cplx(1.0, 0.0));
  const Semicircle sc{1.3, 0.2, 0.9};
  EXPECT_NEAR(MemoryKernel::analytic(sc)(0.0).real(), total_weight(sc), 1e-15);
  EXPECT_NEAR(kernel_quadrature(sc, 0.0).real(), total_weight(sc), 1e-12);
}

TEST(Kernel, VanishesAtFirstBesselZero) {
  const Semicircle sc{1.0, 0.0, 1.0};
  const double s = ref::kBesselJ1FirstZeroHalf[0];
  EXPECT_LT(std::abs(MemoryKernel::analytic(sc)(s)), 1e-14);
  EXPECT_LT(std::abs(kernel_quadrature(sc, s)), 1e-12);
  EXPECT_NEAR(bessel_j1(2.0 * s), 0.0, 1e-15);
}

TEST(Kernel, MatchesIndependentReference) {
  const Semicircle sc{1.3, 0.2, 0.9};
  const auto k = MemoryKernel::analytic(sc);
  for (std::size_t i = 0; i < std::size(ref::kSemiLag); ++i) {
    const cplx expect(ref::kSemiKernelRe[i], ref::kSemiKernelIm[i]);
    EXPECT_LT(std::abs(k(ref::kSemiLag[i]) - expect), 1e-13) << "s=" << ref::kSemiLag[i];
    EXPECT_LT(std::abs(kernel_quadrature(sc, ref::kSemiLag[i]) - expect), 1e-12);
  }
  const Tabulated tab({std::begin(ref::kTabX), std::end(ref::kTabX)},
                      {std::begin(ref::kTabY), std::end(ref::kTabY)});
  for (std::size_t i = 0; i < std::size(ref::kTabLag); ++i) {
    const cplx expect(ref::kTabKernelRe[i], ref::kTabKernelIm[i]);
    EXPECT_LT(std::abs(kernel_quadrature(tab, ref::kTabLag[i]) - expect), 1e-12);
  }
}

TEST(Kernel, AnalyticAgreesWithQuadratureOnThousandLags) {
  const Semicircle sc{1.0, 0.0, 1.0};
  const auto k = MemoryKernel::analytic(sc);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double s = 100.0 * i / 999.0;
    const cplx a = k(s);
    worst = std::max(worst, std::abs(a - kernel_quadrature(sc, s)) / std::abs(a));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Kernel, HermitianLagSymmetry) {
  const Semicircle sc{0.7, 0.4, 1.1};
  const auto a = MemoryKernel::analytic(sc);
  for (double s : {0.3, 2.2, 9.0}) {
    EXPECT_EQ(a(-s), std::conj(a(s)));
    EXPECT_LT(std::abs(kernel_quadrature(sc, -s) - std::conj(kernel_quadrature(sc, s))), 1e-14);
  }
}

TEST(Kernel, DecayEnvelope) {
  const auto k = MemoryKernel::analytic(Semicircle{1.0, 0.0, 1.0});
  double c = 0.0;
  for (double s = 20.0; s <= 100.0; s += 0.05) c = std::max(c, std::abs(k(s)) * std::pow(s, 1.5));
  // Asymptotically |g| s^{3/2} <= 2 / sqrt(pi * 2).
  EXPECT_LT(c, 0.8);
}

TEST(Kernel, QuadratureCacheServesExactLagsOnly) {
  const Semicircle sc{1.0, 0.5, 1.0};
  const auto cached = MemoryKernel::quadrature(sc, 0.01, 200);
  EXPECT_FALSE(cached.is_analytic());
  const auto lags = cached.lag_samples(0.02, 100);
  const auto exact = MemoryKernel::analytic(sc);
  for (std::size_t i = 0; i < lags.size(); ++i) {
    EXPECT_LT(std::abs(lags[i] - exact(0.02 * static_cast<double>(i))), 1e-12);
  }
  EXPECT_THROW(cached.lag_samples(0.015, 10), Error);
  EXPECT_THROW(cached.lag_samples(0.01, 201), Error);
  try {
    cached.lag_samples(0.01, 500);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::KernelCoverage);
  }
}
