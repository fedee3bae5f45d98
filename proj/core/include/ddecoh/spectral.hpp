#pragma once

#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "ddecoh/trace.hpp"

namespace ddecoh {

/// Closed energy interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// J(e) = eta^2 sqrt((2 v0)^2 - (e - eps0)^2) on [eps0 - 2 v0, eps0 + 2 v0].
/// The spectral density of a level side-coupled to a semi-infinite chain.
struct Semicircle {
  double eta = 0.0;
  double eps0 = 0.0;
  double v0 = 1.0;
};

/// Piecewise-linear J sampled on an ascending grid. J vanishes outside the
/// support intervals, which are the maximal runs of grid cells carrying
/// nonzero weight.
class Tabulated {
 public:
  Tabulated(std::vector<double> grid, std::vector<double> values);

  /// Two-column text file (energy, J); '#' starts a comment.
  static Tabulated load(const std::filesystem::path& path);

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<Interval>& band() const { return band_; }

  double operator()(double eps) const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<Interval> band_;
};

using SpectralDensity = std::variant<Semicircle, Tabulated>;

/// Sigma(e) = delta - i j / 2.
struct SelfEnergyValue {
  double delta = 0.0;
  double j = 0.0;
};

struct BoundState {
  double energy = 0.0;
  double amplitude = 0.0;  ///< residue Z = 1 / (1 - Delta'(energy))
};

/// Numerical knobs shared by the spectral routines.
struct SpectralOptions {
  double root_tol = 1e-12;
  /// Roots closer than this to a band edge are rejected; also the floor
  /// below which Delta' is refused.
  double edge_collar = 1e-6;
  double quad_tol = 1e-12;
};

std::vector<Interval> band(const SpectralDensity& sd);

/// (1/2pi) * integral of J; equals g(0).
double total_weight(const SpectralDensity& sd);

/// True when J vanishes identically (eta = 0 or all-zero table).
bool is_decoupled(const SpectralDensity& sd);

double eval_j(const SpectralDensity& sd, double eps);

/// Closed form for Semicircle, principal-value quadrature for Tabulated.
SelfEnergyValue self_energy(const SpectralDensity& sd, double eps,
                            const SpectralOptions& opt = {});

/// Delta(e) by principal-value quadrature regardless of the variant, with the
/// singularity subtracted: J(e') -> J(e') - J(e) plus the analytic log term.
double self_energy_pv(const SpectralDensity& sd, double eps,
                      const SpectralOptions& opt = {});

/// Delta'(e) for e outside the band. Throws TooCloseToBandEdge within
/// opt.edge_collar of an edge.
double self_energy_derivative(const SpectralDensity& sd, double eps,
                              const SpectralOptions& opt = {});

/// Real roots of e - eps_on - Delta(e) = 0 outside the band, ascending.
std::vector<BoundState> find_bound_states(const SpectralDensity& sd,
                                          double eps_on,
                                          const SpectralOptions& opt = {});

/// D(e) split into bound-state poles and the continuum part on the band.
class SystemSpectrum {
 public:
  SystemSpectrum(SpectralDensity sd, double eps_on,
                 const SpectralOptions& opt = {});

  const std::vector<BoundState>& bound() const { return bound_; }
  const SpectralDensity& density() const { return sd_; }
  double eps_on() const { return eps_on_; }

  /// J / ([e - eps_on - Delta]^2 + J^2/4) on the band, 0 elsewhere.
  double band_part(double eps) const;

  /// (1/2pi) * integral of band_part.
  double band_weight() const;

  /// sum Z_i + band_weight(); 1 for an exact spectrum.
  double sum_rule() const;

 private:
  SpectralDensity sd_;
  double eps_on_;
  SpectralOptions opt_;
  std::vector<BoundState> bound_;
};

SystemSpectrum spectrum(const SpectralDensity& sd, double eps_on,
                        const SpectralOptions& opt = {});

/// Driving-free propagator from the spectral representation.
PropagatorTrace compute_u0(const SpectralDensity& sd, double eps_on,
                           const TimeGrid& grid,
                           const SpectralOptions& opt = {});

}  // namespace ddecoh
