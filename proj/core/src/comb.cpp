#include "ddecoh/comb.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <nlohmann/json.hpp>
#include <numbers>
#include <numeric>

#include "ddecoh/error.hpp"

namespace ddecoh {

const char* to_string(Prediction p) noexcept {
  return p == Prediction::Survives ? "survives" : "dissipates";
}

const char* to_string(Reliability r) noexcept {
  return r == Reliability::WeakDrivingValid ? "weak-driving-valid"
                                            : "strong-driving-unreliable";
}

namespace {

/// Fewest signed harmonics from `present` summing to each n in [-n_max, n_max];
/// 0 marks unreachable (n = 0 excluded).
std::vector<int> quanta_needed(const std::vector<int>& present, int n_max) {
  const int top = present.empty() ? 0 : *std::max_element(present.begin(), present.end());
  const int lim = n_max + top;
  std::vector<int> dist(static_cast<std::size_t>(2 * lim + 1), -1);
  auto at = [&](int n) -> int& { return dist[static_cast<std::size_t>(n + lim)]; };
  std::deque<int> queue{0};
  at(0) = 0;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    for (int s : present) {
      for (int y : {x + s, x - s}) {
        if (y < -lim || y > lim || at(y) >= 0) continue;
        at(y) = at(x) + 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<int> out(static_cast<std::size_t>(n_max + 1), 0);
  for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n)] = std::max(at(n), 0);
  return out;
}

bool in_band(std::span<const Interval> band, double e) {
  return std::any_of(band.begin(), band.end(), [e](const Interval& iv) { return iv.contains(e); });
}

double gap_to_band(std::span<const Interval> band, double e) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : band) {
    if (iv.contains(e)) return 0.0;
    d = std::min({d, std::abs(e - iv.lo), std::abs(e - iv.hi)});
  }
  return d;
}

}  // namespace

CombReport comb_report(std::span<const BoundState> bound, const DrivingField& drive,
                       std::span<const Interval> band, const CombOptions& opt) {
  if (opt.n_max < 1) throw Error(ErrorKind::Config, "n_max must be >= 1");
  drive.validate();
  const double dw = drive.frequency();
  const auto present = is_static(drive) ? std::vector<int>{} : harmonic_content(drive, opt.n_max);
  const auto order = quanta_needed(present, opt.n_max);

  CombReport report;
  report.drive_amplitude = drive_amplitude(drive);
  double threshold = std::numeric_limits<double>::infinity();
  for (const auto& bs : bound) threshold = std::min(threshold, gap_to_band(band, bs.energy));
  report.strong_threshold = opt.strong_threshold.value_or(threshold);

  for (const auto& bs : bound) {
    BoundStateComb st;
    st.eps_l = bs.energy;
    for (int n = 1; n <= opt.n_max; ++n) {
      const int q = order[static_cast<std::size_t>(n)];
      if (q == 0) continue;
      for (int sign : {-1, +1}) {
        const double e = bs.energy + sign * n * dw;
        if (!in_band(band, e)) continue;
        st.overlaps.push_back({n, sign, e, q});
        if (!st.min_harmonic || n < *st.min_harmonic) st.min_harmonic = n;
        if (!st.min_order || q < *st.min_order) st.min_order = q;
      }
    }
    st.prediction = st.overlaps.empty() ? Prediction::Survives : Prediction::Dissipates;
    report.states.push_back(std::move(st));
  }
  report.reliability = report.drive_amplitude > 0.0 &&
                               report.drive_amplitude >= report.strong_threshold
                           ? Reliability::StrongDrivingUnreliable
                           : Reliability::WeakDrivingValid;
  return report;
}

std::string to_json(const CombReport& report, int indent) {
  nlohmann::ordered_json j;
  j["reliability"] = to_string(report.reliability);
  j["drive_amplitude"] = report.drive_amplitude;
  if (std::isfinite(report.strong_threshold)) {
    j["strong_threshold"] = report.strong_threshold;
  } else {
    j["strong_threshold"] = nullptr;
  }
  j["states"] = nlohmann::ordered_json::array();
  for (const auto& st : report.states) {
    nlohmann::ordered_json s;
    s["eps_l"] = st.eps_l;
    s["prediction"] = to_string(st.prediction);
    s["min_harmonic"] = st.min_harmonic ? nlohmann::ordered_json(*st.min_harmonic) : nlohmann::ordered_json(nullptr);
    s["min_order"] = st.min_order ? nlohmann::ordered_json(*st.min_order) : nlohmann::ordered_json(nullptr);
    s["overlaps"] = nlohmann::ordered_json::array();
    for (const auto& o : st.overlaps) {
      s["overlaps"].push_back({{"n", o.n}, {"sign", o.sign}, {"energy", o.energy}, {"order", o.order}});
    }
    j["states"].push_back(std::move(s));
  }
  return j.dump(indent);
}

namespace {

struct WindowRange {
  std::size_t first, last;
};

WindowRange window_indices(const PropagatorTrace& trace, Interval window) {
  const auto& g = trace.grid;
  const double slack = 1e-9 * g.h;
  if (trace.values.empty() || !(window.hi > window.lo) || window.lo < g.t0 - slack ||
      window.hi > trace.time(trace.values.size() - 1) + slack) {
    throw Error(ErrorKind::WindowOutOfRange,
                "window [" + std::to_string(window.lo) + ", " + std::to_string(window.hi) +
                    "] is empty or outside the trace span");
  }
  const auto first = static_cast<std::size_t>(std::max(0.0, std::ceil((window.lo - g.t0) / g.h - 1e-9)));
  const auto last = std::min(trace.values.size() - 1,
                             static_cast<std::size_t>(std::floor((window.hi - g.t0) / g.h + 1e-9)));
  if (last <= first) {
    throw Error(ErrorKind::WindowOutOfRange, "window holds fewer than two samples");
  }
  return {first, last};
}

}  // namespace

double survival_metric(const PropagatorTrace& trace, Interval window) {
  const auto [first, last] = window_indices(trace, window);
  double s = 0.0;
  for (std::size_t k = first; k < last; ++k) {
    s += 0.5 * (std::abs(trace.values[k]) + std::abs(trace.values[k + 1]));
  }
  return s / static_cast<double>(last - first);
}

std::vector<SpectralPeak> late_window_peaks(const PropagatorTrace& trace, Interval window,
                                            const PeakOptions& opt) {
  const auto [first, last] = window_indices(trace, window);
  const std::size_t m = last - first + 1;
  std::size_t p = 1;
  while (p < m * static_cast<std::size_t>(std::max(opt.zero_pad, 1))) p <<= 1;

  using Buffer = std::unique_ptr<fftw_complex[], decltype(&fftw_free)>;
  Buffer buf(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * p)), &fftw_free);
  double window_sum = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    if (k < m) {
      const double w = m > 1 ? 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi *
                                                      static_cast<double>(k) /
                                                      static_cast<double>(m - 1)))
                             : 1.0;
      window_sum += w;
      buf[k][0] = w * trace.values[first + k].real();
      buf[k][1] = w * trace.values[first + k].imag();
    } else {
      buf[k][0] = buf[k][1] = 0.0;
    }
  }
  // Backward transform: a component exp(-i e t) peaks at bin e h p / 2 pi.
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(p), buf.get(), buf.get(),
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  // Reorder bins by ascending frequency.
  std::vector<double> mag(p);
  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t src = (j + p / 2) % p;
    mag[j] = std::hypot(buf[src][0], buf[src][1]);
  }
  const double bin_width = 2.0 * std::numbers::pi / (static_cast<double>(p) * trace.grid.h);
  auto frequency_of = [&](double j) { return (j - static_cast<double>(p / 2)) * bin_width; };

  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(p / 2), sorted.end());
  const double median = sorted[p / 2];
  const double top = *std::max_element(mag.begin(), mag.end());

  std::vector<SpectralPeak> peaks;
  for (std::size_t j = 1; j + 1 < p; ++j) {
    const double y = mag[j];
    if (!(y > mag[j - 1] && y >= mag[j + 1])) continue;
    if (y <= opt.median_factor * median || y < opt.min_relative * top) continue;
    const double amplitude = y / window_sum;
    if (amplitude < opt.min_amplitude) continue;
    // Parabolic refinement through the three bins around the maximum.
    const double a = mag[j - 1], c = mag[j + 1];
    const double denom = a - 2.0 * y + c;
    const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    peaks.push_back({frequency_of(static_cast<double>(j) + shift), y / top, amplitude});
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const SpectralPeak& x, const SpectralPeak& y) { return x.weight > y.weight; });
  return peaks;
}

}  // namespace ddecoh
