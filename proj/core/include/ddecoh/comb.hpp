#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddecoh/driving.hpp"
#include "ddecoh/spectral.hpp"
#include "ddecoh/trace.hpp"

namespace ddecoh {

enum class Prediction { Survives, Dissipates };
enum class Reliability { WeakDrivingValid, StrongDrivingUnreliable };

const char* to_string(Prediction p) noexcept;
const char* to_string(Reliability r) noexcept;

/// eps_l + sign * n * dw landing inside the band.
struct CombOverlap {
  int n = 0;
  int sign = 0;
  double energy = 0.0;
  /// Fewest drive quanta needed to transfer n * dw (1 when a single
  /// harmonic bridges directly).
  int order = 0;
};

struct BoundStateComb {
  double eps_l = 0.0;
  std::vector<CombOverlap> overlaps;
  std::optional<int> min_harmonic;  ///< smallest |n| with an overlap
  std::optional<int> min_order;     ///< smallest order over the overlaps
  Prediction prediction = Prediction::Survives;
};

struct CombReport {
  std::vector<BoundStateComb> states;
  Reliability reliability = Reliability::WeakDrivingValid;
  double drive_amplitude = 0.0;
  double strong_threshold = 0.0;
};

struct CombOptions {
  int n_max = 12;
  /// Amplitude at or above which the report is flagged unreliable. Defaults
  /// to the smallest distance from a bound state to the band.
  std::optional<double> strong_threshold;
};

/// Frequency-comb survival analysis: a bound state dissipates when some
/// eps_l +- n dw (1 <= n <= n_max) falls inside the band.
CombReport comb_report(std::span<const BoundState> bound,
                       const DrivingField& drive,
                       std::span<const Interval> band,
                       const CombOptions& opt = {});

std::string to_json(const CombReport& report, int indent = 2);

/// Time average of |u(t)| over `window` (trapezoidal on the grid points
/// inside it). Throws WindowOutOfRange.
double survival_metric(const PropagatorTrace& trace, Interval window);

struct SpectralPeak {
  double frequency = 0.0;  ///< energy e for a component exp(-i e t)
  double weight = 0.0;     ///< magnitude relative to the largest peak
  double amplitude = 0.0;  ///< estimated line amplitude in units of |u|
};

struct PeakOptions {
  /// A peak must exceed this multiple of the median spectral magnitude.
  double median_factor = 10.0;
  /// ... and this fraction of the strongest peak.
  double min_relative = 0.1;
  /// ... and carry at least this line amplitude (a pure Z exp(-i e t) has
  /// amplitude Z), so that a decayed trace reports nothing.
  double min_amplitude = 0.02;
  /// Zero padding factor for the transform.
  int zero_pad = 8;
};

/// Hann-windowed discrete Fourier analysis of u on `window`; returns local
/// maxima of the magnitude above both thresholds, strongest first.
std::vector<SpectralPeak> late_window_peaks(const PropagatorTrace& trace,
                                            Interval window,
                                            const PeakOptions& opt = {});

}  // namespace ddecoh
