#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ddecoh/error.hpp"
#include "ddecoh/spectral.hpp"

namespace ddecoh::detail {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

/// Adaptive Gauss-Kronrod (7/15) over [lo, hi] after the substitution
/// x = c + r cos(theta). Square-root behaviour at either end becomes smooth
/// in theta. Throws QuadratureFailure when the error estimate is far above
/// rel_tol * L1.
template <class F>
auto integrate_cos(F&& f, double lo, double hi, double rel_tol,
                   double abs_tol = 1e-15, unsigned max_depth = 24) {
  using R = decltype(f(lo));
  const double c = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo);
  if (r <= 0.0) return R{};
  auto g = [&](double theta) -> R {
    return f(c + r * std::cos(theta)) * (r * std::sin(theta));
  };
  double err = 0.0;
  double l1 = 0.0;
  R value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      g, 0.0, kPi, max_depth, rel_tol, &err, &l1);
  // Once converged, |K15 - G7| overstates the Kronrod error by orders of
  // magnitude; this only catches genuine non-convergence.
  constexpr double kSlack = 1e3;
  if (!std::isfinite(magnitude(value)) || err > std::max(kSlack * rel_tol * l1, abs_tol)) {
    throw Error(ErrorKind::QuadratureFailure,
                fmt::format("adaptive quadrature on [{}, {}] did not converge "
                            "(error estimate {:.3e}, scale {:.3e})",
                            lo, hi, err, l1));
  }
  return value;
}

/// Cells over which J is smooth: the band for Semicircle, the support cells
/// of the table for Tabulated.
std::vector<Interval> smooth_pieces(const SpectralDensity& sd);

/// Gauss-Legendre nodes on [0, pi] in theta for one band interval, mapped to
/// energies. Panels are sized so that the phase e * t_span changes by at most
/// pi/4 across a panel, then bisected until `f` (in theta, Jacobian included)
/// is resolved to `tol`.
struct BandNodes {
  std::vector<double> energy;
  std::vector<double> weight;  ///< includes f and the Jacobian
};

template <class F>
void append_band_nodes(BandNodes& out, F&& f, Interval iv, double t_span,
                       double tol);

}  // namespace ddecoh::detail

#include "quadrature_impl.hpp"
