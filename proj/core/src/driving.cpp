#include "ddecoh/driving.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ddecoh/error.hpp"

namespace ddecoh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Position inside the period, in [0, T).
double phase_in_period(double t, double period) {
  double p = std::fmod(t, period);
  if (p < 0.0) p += period;
  if (p >= period) p -= period;
  return p;
}

}  // namespace

double DrivingField::frequency() const { return kTwoPi / period; }

void DrivingField::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw Error(ErrorKind::Config, "drive period must be positive and finite");
  }
  if (!std::isfinite(mean)) throw Error(ErrorKind::Config, "drive mean must be finite");
  const bool ok = std::visit(
      overloaded{
          [](const Sine& s) { return std::isfinite(s.amplitude); },
          [](const Square& s) { return std::isfinite(s.amplitude); },
          [](const Harmonics& h) {
            return std::all_of(h.terms.begin(), h.terms.end(), [](const FourierPair& p) {
              return std::isfinite(p.a) && std::isfinite(p.b);
            });
          },
      },
      shape);
  if (!ok) throw Error(ErrorKind::Config, "drive amplitudes must be finite");
}

double drive_offset(const DrivingField& f, double t) {
  const double w = f.frequency();
  return std::visit(
      overloaded{
          [&](const Sine& s) { return s.amplitude * std::sin(w * t); },
          [&](const Square& s) {
            return phase_in_period(t, f.period) < 0.5 * f.period ? s.amplitude
                                                                  : -s.amplitude;
          },
          [&](const Harmonics& h) {
            double v = 0.0;
            for (std::size_t i = 0; i < h.terms.size(); ++i) {
              const double wn = w * static_cast<double>(i + 1);
              v += h.terms[i].a * std::sin(wn * t) + h.terms[i].b * std::cos(wn * t);
            }
            return v;
          },
      },
      f.shape);
}

double eval_drive(const DrivingField& f, double t) { return f.mean + drive_offset(f, t); }

double drive_phase(const DrivingField& f, double t) {
  const double w = f.frequency();
  return std::visit(
      overloaded{
          [&](const Sine& s) { return s.amplitude * (1.0 - std::cos(w * t)) / w; },
          [&](const Square& s) {
            // Triangle wave: rises on the first half period, falls back to
            // zero on the second.
            const double p = phase_in_period(t, f.period);
            return s.amplitude * std::min(p, f.period - p);
          },
          [&](const Harmonics& h) {
            double v = 0.0;
            for (std::size_t i = 0; i < h.terms.size(); ++i) {
              const double wn = w * static_cast<double>(i + 1);
              v += h.terms[i].a * (1.0 - std::cos(wn * t)) / wn +
                   h.terms[i].b * std::sin(wn * t) / wn;
            }
            return v;
          },
      },
      f.shape);
}

double drive_amplitude(const DrivingField& f) {
  return std::visit(
      overloaded{
          [](const Sine& s) { return std::abs(s.amplitude); },
          [](const Square& s) { return std::abs(s.amplitude); },
          [&](const Harmonics& h) {
            // Dense sampling followed by a golden-section polish of the best
            // sample; the series is smooth so this finds the global maximum.
            const std::size_t n = 64 * std::max<std::size_t>(h.terms.size(), 1);
            double best = 0.0, best_t = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
              const double t = f.period * static_cast<double>(k) / static_cast<double>(n);
              const double v = std::abs(drive_offset(f, t));
              if (v > best) best = v, best_t = t;
            }
            double a = best_t - f.period / static_cast<double>(n);
            double b = best_t + f.period / static_cast<double>(n);
            const double g = 0.5 * (std::sqrt(5.0) - 1.0);
            for (int it = 0; it < 60; ++it) {
              const double c = b - g * (b - a), d = a + g * (b - a);
              if (std::abs(drive_offset(f, c)) > std::abs(drive_offset(f, d))) {
                b = d;
              } else {
                a = c;
              }
            }
            return std::max(best, std::abs(drive_offset(f, 0.5 * (a + b))));
          },
      },
      f.shape);
}

bool is_static(const DrivingField& f) {
  return std::visit(
      overloaded{
          [](const Sine& s) { return s.amplitude == 0.0; },
          [](const Square& s) { return s.amplitude == 0.0; },
          [](const Harmonics& h) {
            return std::all_of(h.terms.begin(), h.terms.end(), [](const FourierPair& p) {
              return p.a == 0.0 && p.b == 0.0;
            });
          },
      },
      f.shape);
}

std::vector<FourierPair> fourier_coefficients(const DrivingField& f, int n_max) {
  if (n_max < 1) throw Error(ErrorKind::Config, "n_max must be >= 1");
  std::vector<FourierPair> out(static_cast<std::size_t>(n_max));
  std::visit(
      overloaded{
          [&](const Sine& s) { out[0].a = s.amplitude; },
          [&](const Square& s) {
            // (2/T) int_0^T sq(t) sin(w_n t) dt = 4A/(n pi) for odd n.
            for (int n = 1; n <= n_max; n += 2) {
              out[static_cast<std::size_t>(n - 1)].a =
                  4.0 * s.amplitude / (static_cast<double>(n) * std::numbers::pi);
            }
          },
          [&](const Harmonics& h) {
            for (std::size_t i = 0; i < h.terms.size() && i < out.size(); ++i) {
              out[i] = h.terms[i];
            }
          },
      },
      f.shape);
  return out;
}

std::vector<int> harmonic_content(const DrivingField& f, int n_max) {
  std::vector<int> out;
  const auto c = fourier_coefficients(f, n_max);
  for (int n = 1; n <= n_max; ++n) {
    const auto& p = c[static_cast<std::size_t>(n - 1)];
    if (p.a != 0.0 || p.b != 0.0) out.push_back(n);
  }
  return out;
}

double snap_step(const DrivingField& f, double h) {
  if (!std::holds_alternative<Square>(f.shape) || is_static(f)) return h;
  const double half = 0.5 * f.period;
  const double m = std::ceil(half / h * (1.0 - 1e-12));
  return half / m;
}

std::vector<double> switch_times(const DrivingField& f, double t_a, double t_b) {
  std::vector<double> out;
  if (!std::holds_alternative<Square>(f.shape) || is_static(f)) return out;
  const double half = 0.5 * f.period;
  for (double k = std::floor(t_a / half) + 1.0;; k += 1.0) {
    const double ts = k * half;
    if (ts >= t_b) break;
    if (ts > t_a) out.push_back(ts);
  }
  return out;
}

}  // namespace ddecoh
