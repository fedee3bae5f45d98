#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "ddecoh/spectral.hpp"
#include "ddecoh/trace.hpp"

namespace ddecoh {

/// J1 via the standard library.
double bessel_j1(double x);

/// g(s) = (1/2pi) integral J(e) exp(-i e s) de by adaptive quadrature.
cplx kernel_quadrature(const SpectralDensity& sd, double s, double tol = 1e-13);

/// Stationary reservoir memory kernel g(t - tau).
///
/// The analytic variant evaluates the semicircle kernel
///   g(s) = eta^2 v0 exp(-i eps0 s) J1(2 v0 s) / s,  g(0) = eta^2 v0^2
/// anywhere. The quadrature variant integrates J exp(-i e s) once per lag on
/// a fixed grid k * h_cache and serves only exact multiples of that grid.
class MemoryKernel {
 public:
  static MemoryKernel analytic(const Semicircle& sc);
  static MemoryKernel quadrature(const SpectralDensity& sd, double h_cache,
                                 std::size_t n_lags, double tol = 1e-13);

  /// Analytic kernel for Semicircle, quadrature cache otherwise.
  static MemoryKernel from_density(const SpectralDensity& sd, double h_cache,
                                   std::size_t n_lags);

  /// g(s) for any real lag; negative lags use g(-s) = conj(g(s)). The
  /// quadrature variant integrates directly here (no cache).
  cplx operator()(double s) const;

  /// g(k h) for k = 0..n_lags. Throws KernelCoverage when the quadrature
  /// cache cannot serve the request exactly.
  std::vector<cplx> lag_samples(double h, std::size_t n_lags) const;

  bool is_analytic() const { return analytic_; }

 private:
  MemoryKernel() = default;

  bool analytic_ = true;
  Semicircle sc_{};
  std::shared_ptr<const SpectralDensity> sd_;
  double h_cache_ = 0.0;
  std::shared_ptr<const std::vector<cplx>> cache_;
  double tol_ = 1e-13;
};

inline cplx kernel_eval(const MemoryKernel& k, double s) { return k(s); }

}  // namespace ddecoh
