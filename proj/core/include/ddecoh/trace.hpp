#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ddecoh {

using cplx = std::complex<double>;

/// Uniform grid t_k = t0 + k h, k = 0..n_steps.
struct TimeGrid {
  double t0 = 0.0;
  double h = 0.01;
  std::size_t n_steps = 0;

  double time(std::size_t k) const { return t0 + static_cast<double>(k) * h; }
  double t_end() const { return time(n_steps); }
  std::size_t size() const { return n_steps + 1; }

  /// Grid from t0 to t_max with step h; t_max is rounded to the nearest
  /// whole number of steps.
  static TimeGrid span(double t0, double t_max, double h);

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

struct PropagatorTrace {
  TimeGrid grid;
  std::vector<cplx> values;

  double time(std::size_t k) const { return grid.time(k); }

  /// Index of the grid point nearest to t (clamped to the grid).
  std::size_t index_at(double t) const;

  /// Every stride-th sample, keeping the final point when it falls on the
  /// stride.
  PropagatorTrace decimate(std::size_t stride) const;
};

/// CSV with columns t,re_u,im_u,abs_u. A non-empty `metadata_json` is written
/// first as a single `# {...}` line.
void write_trace_csv(std::ostream& os, const PropagatorTrace& trace,
                     const std::string& metadata_json = {});

/// Inverse of write_trace_csv; the metadata line (if any) goes to
/// `metadata_json`.
PropagatorTrace read_trace_csv(std::istream& is,
                               std::string* metadata_json = nullptr);

struct SvgCurve {
  std::string label;
  std::string color;
  const PropagatorTrace* trace = nullptr;
  bool dashed = false;
};

/// Line plot of |u(t)| for one or more traces.
void write_abs_svg(std::ostream& os, const std::vector<SvgCurve>& curves,
                   const std::string& title);

}  // namespace ddecoh
