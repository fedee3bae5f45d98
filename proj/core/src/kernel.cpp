#include "ddecoh/kernel.hpp"

#include <cmath>
#include <string>

#include "ddecoh/error.hpp"
#include "quadrature.hpp"

namespace ddecoh {

double bessel_j1(double x) {
  if (x < 0.0) return -bessel_j1(-x);
  return std::cyl_bessel_j(1.0, x);
}

cplx kernel_quadrature(const SpectralDensity& sd, double s, double tol) {
  if (s < 0.0) return std::conj(kernel_quadrature(sd, -s, tol));
  // Panels keep the phase e * s below pi/4 each, so Gauss-Legendre handles
  // the oscillation; bisection only has to resolve J itself.
  detail::BandNodes nodes;
  auto j = [&](double e) { return eval_j(sd, e); };
  const double scale = std::max(total_weight(sd), 1e-300);
  for (const auto& piece : detail::smooth_pieces(sd)) {
    detail::append_band_nodes(nodes, j, piece, s, tol * scale);
  }
  cplx sum{};
  for (std::size_t i = 0; i < nodes.energy.size(); ++i) {
    const double e = nodes.energy[i];
    sum += nodes.weight[i] * cplx(std::cos(e * s), -std::sin(e * s));
  }
  return sum / detail::kTwoPi;
}

namespace {

cplx semicircle_kernel(const Semicircle& sc, double s) {
  if (s < 0.0) return std::conj(semicircle_kernel(sc, -s));
  const double eta2 = sc.eta * sc.eta;
  const double x = 2.0 * sc.v0 * s;
  // J1(x)/x = 1/2 - x^2/16 + x^4/384 - ...; the series avoids 0/0 near s = 0.
  double ratio;
  if (x < 1e-4) {
    const double x2 = x * x;
    ratio = 0.5 - x2 / 16.0 + x2 * x2 / 384.0;
  } else {
    ratio = bessel_j1(x) / x;
  }
  const double mag = eta2 * 2.0 * sc.v0 * sc.v0 * ratio;
  return mag * cplx(std::cos(sc.eps0 * s), -std::sin(sc.eps0 * s));
}

}  // namespace

MemoryKernel MemoryKernel::analytic(const Semicircle& sc) {
  MemoryKernel k;
  k.analytic_ = true;
  k.sc_ = sc;
  return k;
}

MemoryKernel MemoryKernel::quadrature(const SpectralDensity& sd, double h_cache,
                                      std::size_t n_lags, double tol) {
  if (!(h_cache > 0.0)) {
    throw Error(ErrorKind::Config, "kernel cache step must be positive");
  }
  MemoryKernel k;
  k.analytic_ = false;
  k.sd_ = std::make_shared<const SpectralDensity>(sd);
  k.h_cache_ = h_cache;
  k.tol_ = tol;
  auto cache = std::make_shared<std::vector<cplx>>(n_lags + 1);
  for (std::size_t i = 0; i <= n_lags; ++i) {
    (*cache)[i] = kernel_quadrature(sd, static_cast<double>(i) * h_cache, tol);
  }
  k.cache_ = std::move(cache);
  return k;
}

MemoryKernel MemoryKernel::from_density(const SpectralDensity& sd,
                                        double h_cache, std::size_t n_lags) {
  if (const auto* sc = std::get_if<Semicircle>(&sd)) return analytic(*sc);
  return quadrature(sd, h_cache, n_lags);
}

cplx MemoryKernel::operator()(double s) const {
  if (analytic_) return semicircle_kernel(sc_, s);
  return kernel_quadrature(*sd_, s, tol_);
}

std::vector<cplx> MemoryKernel::lag_samples(double h, std::size_t n_lags) const {
  std::vector<cplx> out(n_lags + 1);
  if (analytic_) {
    for (std::size_t i = 0; i <= n_lags; ++i) {
      out[i] = semicircle_kernel(sc_, static_cast<double>(i) * h);
    }
    return out;
  }
  // Only exact multiples of the cached step are served.
  const double ratio = h / h_cache_;
  const double stride_f = std::round(ratio);
  if (stride_f < 1.0 || std::abs(ratio - stride_f) > 1e-9 * ratio) {
    throw Error(ErrorKind::KernelCoverage,
                "kernel cache step " + std::to_string(h_cache_) +
                    " does not divide the solver step " + std::to_string(h));
  }
  const auto stride = static_cast<std::size_t>(stride_f);
  if (n_lags * stride >= cache_->size()) {
    throw Error(ErrorKind::KernelCoverage,
                "kernel cache covers lags up to " +
                    std::to_string(h_cache_ * static_cast<double>(cache_->size() - 1)) +
                    ", solver needs " + std::to_string(h * static_cast<double>(n_lags)));
  }
  for (std::size_t i = 0; i <= n_lags; ++i) out[i] = (*cache_)[i * stride];
  return out;
}

}  // namespace ddecoh
