#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "ddecoh/driving.hpp"
#include "ddecoh/spectral.hpp"
#include "ddecoh/trace.hpp"

namespace ddecoh {

/// Finite star model: one system level coupled to N reservoir modes.
struct LatticeModel {
  std::vector<double> eps_k;  ///< ascending mode energies inside the band
  std::vector<double> v_k;    ///< real couplings >= 0
  double eps_s = 0.0;

  std::size_t n_modes() const { return eps_k.size(); }
  double coupling_weight() const;  ///< sum v_k^2
};

/// Midpoint rule on the band: modes at cell centres, v_k = sqrt(J(e_k) de / 2pi).
/// Multi-interval bands share the cells in proportion to interval width.
LatticeModel discretize(const SpectralDensity& sd, std::size_t n_modes,
                        double eps_s = 0.0);

/// 2 pi / (smallest mode spacing); the finite model revives after this.
double recurrence_time(const LatticeModel& m);

/// Eigenvalues of the static single-particle Hamiltonian (system energy
/// eps_on) lying outside [eps_k.front(), eps_k.back()], from the secular
/// equation e - eps_on - sum v_k^2 / (e - eps_k) = 0.
std::vector<double> isolated_levels(const LatticeModel& m, double eps_on);

struct OracleOptions {
  /// Upper bound on h times the Hamiltonian norm bound.
  double max_step_norm = 0.1;
  /// Sub-steps per grid step.
  int substeps = 1;
};

struct OracleRun {
  PropagatorTrace trace;
  double max_norm_defect = 0.0;  ///< max_k | ||psi_k|| - 1 |
};

/// Propagates the (N+1)-dimensional single-particle Schroedinger equation
/// from the system site with the midpoint exponential
/// psi <- exp(-i h H(t + h/2)) psi, applying the exponential by a Taylor
/// series run to machine precision. Square-wave switch points split a step
/// so that each piece sees a constant Hamiltonian.
OracleRun propagate(const LatticeModel& m, const DrivingField& drive,
                    const TimeGrid& grid, const OracleOptions& opt = {});

/// max_k |a_k - b_k| over t_k <= t_max. Throws GridMismatch for different grids.
double compare(const PropagatorTrace& a, const PropagatorTrace& b,
               double t_max = std::numeric_limits<double>::infinity());

}  // namespace ddecoh
