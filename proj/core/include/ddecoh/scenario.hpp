#pragma once

#include <optional>

#include "ddecoh/comb.hpp"
#include "ddecoh/driving.hpp"
#include "ddecoh/kernel.hpp"
#include "ddecoh/spectral.hpp"
#include "ddecoh/trace.hpp"
#include "ddecoh/volterra.hpp"

namespace ddecoh {

enum class KernelKind { Analytic, Quadrature };

/// One fully specified driven-level problem. Energies are in units of the
/// hopping scale v0 (hbar = 1).
struct Scenario {
  SpectralDensity density = Semicircle{1.0, 0.0, 1.0};
  double eps_s = 0.0;
  DrivingField drive;
  double t_max = 50.0;
  double h = 0.005;
  KernelKind kernel = KernelKind::Analytic;

  double eps_on() const { return eps_s + drive.mean; }

  /// Grid from 0 to t_max; the step is snapped to square-wave switch times.
  TimeGrid grid() const;

  /// Kernel able to serve `grid()` and its h/2 refinement.
  MemoryKernel make_kernel() const;

  void validate() const;  ///< throws Error(Config)
};

struct ScenarioResult {
  std::vector<BoundState> bound;
  CombReport comb;
  PropagatorTrace trace;
  std::optional<double> error_estimate;
};

/// Bound states, comb report and the driven propagator for one scenario.
/// With `with_convergence` the trace is the h/2 solution of convergence_check.
ScenarioResult run_scenario(const Scenario& sc, const CombOptions& comb = {},
                            bool with_convergence = false,
                            double convergence_tol = 1e-2);

}  // namespace ddecoh
