#include "ddecoh/scenario.hpp"

#include <cmath>

#include "ddecoh/error.hpp"

namespace ddecoh {

TimeGrid Scenario::grid() const { return TimeGrid::span(0.0, t_max, snap_step(drive, h)); }

MemoryKernel Scenario::make_kernel() const {
  const TimeGrid g = grid();
  if (kernel == KernelKind::Analytic) {
    if (const auto* sc = std::get_if<Semicircle>(&density)) return MemoryKernel::analytic(*sc);
  }
  return MemoryKernel::quadrature(density, 0.5 * g.h, 2 * g.n_steps);
}

void Scenario::validate() const {
  drive.validate();
  if (!std::isfinite(eps_s)) throw Error(ErrorKind::Config, "eps_s must be finite");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorKind::Config, "t_max must be positive and finite");
  }
  if (!(h > 0.0) || !(h < t_max)) throw Error(ErrorKind::Config, "h must lie in (0, t_max)");
  if (const auto* sc = std::get_if<Semicircle>(&density)) {
    if (!(sc->v0 > 0.0) || !std::isfinite(sc->eta) || !std::isfinite(sc->eps0)) {
      throw Error(ErrorKind::Config, "semicircle needs v0 > 0 and finite eta, eps0");
    }
  }
}

ScenarioResult run_scenario(const Scenario& sc, const CombOptions& comb,
                            bool with_convergence, double convergence_tol) {
  sc.validate();
  ScenarioResult out;
  out.bound = find_bound_states(sc.density, sc.eps_on());
  const auto bands = band(sc.density);
  out.comb = comb_report(out.bound, sc.drive, bands, comb);
  const MemoryKernel kernel = sc.make_kernel();
  if (with_convergence) {
    auto cr = convergence_check(kernel, sc.eps_s, sc.drive, sc.grid(), convergence_tol);
    out.trace = std::move(cr.trace);
    out.error_estimate = cr.error_estimate;
  } else {
    out.trace = evolve(kernel, sc.eps_s, sc.drive, sc.grid());
  }
  return out;
}

}  // namespace ddecoh
