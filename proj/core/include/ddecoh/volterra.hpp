#pragma once

#include "ddecoh/driving.hpp"
#include "ddecoh/kernel.hpp"
#include "ddecoh/trace.hpp"

namespace ddecoh {

struct VolterraOptions {
  /// Upper bound on h * max|eps_s + eps_d(t)|.
  double max_phase_step = 0.1;
  /// Minimum samples per drive period (h <= T / this).
  double min_samples_per_period = 40.0;
};

/// Solves
///   du/dt = -i [eps_s + eps_d(t)] u(t) - int_{t0}^{t} g(t - tau) u(tau) dtau,
///   u(t0) = 1
/// on a uniform grid. The on-site phase is removed exactly through
/// phi(t) = int [eps_s + eps_d]; the memory integral uses the trapezoidal
/// rule and each step is an AB2 predictor followed by one trapezoidal
/// corrector pass. Second order in h.
///
/// The history sum is accumulated in four interleaved partial sums over
/// ascending lag index, combined as (s0 + s1) + (s2 + s3); results are
/// bitwise reproducible for a given grid.
PropagatorTrace evolve(const MemoryKernel& kernel, double eps_s,
                       const DrivingField& drive, const TimeGrid& grid,
                       const VolterraOptions& opt = {});

struct ConvergenceResult {
  PropagatorTrace trace;  ///< the h/2 solution
  double error_estimate = 0.0;
};

/// Runs evolve at h and h/2 and reports the largest deviation on shared
/// points. Throws StepTooLarge when that exceeds `tolerance`.
ConvergenceResult convergence_check(const MemoryKernel& kernel, double eps_s,
                                    const DrivingField& drive,
                                    const TimeGrid& grid,
                                    double tolerance = 1e-2,
                                    const VolterraOptions& opt = {});

}  // namespace ddecoh
