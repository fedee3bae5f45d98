#pragma once

#include <variant>
#include <vector>

namespace ddecoh {

struct Sine {
  double amplitude = 0.0;
};

/// +A on [nT, (n+1/2)T), -A on [(n+1/2)T, (n+1)T).
struct Square {
  double amplitude = 0.0;
};

/// One Fourier term A_n sin(w_n t) + B_n cos(w_n t), w_n = 2 pi n / T.
struct FourierPair {
  double a = 0.0;
  double b = 0.0;
  friend bool operator==(const FourierPair&, const FourierPair&) = default;
};

/// Explicit series; entry i is harmonic n = i + 1.
struct Harmonics {
  std::vector<FourierPair> terms;
};

using DriveShape = std::variant<Sine, Square, Harmonics>;

/// eps_d(t) = mean + Delta eps_d(t), with Delta eps_d periodic and zero-mean.
struct DrivingField {
  double mean = 0.0;
  double period = 1.0;
  DriveShape shape = Sine{};

  static DrivingField constant(double mean) { return {mean, 1.0, Sine{0.0}}; }

  double frequency() const;  ///< fundamental 2 pi / T
  void validate() const;     ///< throws Error(Config) on T <= 0 or non-finite data
};

/// mean + Delta eps_d(t).
double eval_drive(const DrivingField& f, double t);

/// Delta eps_d(t) alone.
double drive_offset(const DrivingField& f, double t);

/// Integral of Delta eps_d over [0, t], in closed form for every shape.
double drive_phase(const DrivingField& f, double t);

/// max_t |Delta eps_d(t)|.
double drive_amplitude(const DrivingField& f);

/// True when Delta eps_d vanishes identically.
bool is_static(const DrivingField& f);

/// Closed-form Fourier coefficients for harmonics 1..n_max.
std::vector<FourierPair> fourier_coefficients(const DrivingField& f, int n_max);

/// Harmonics n in 1..n_max carried by the drive.
std::vector<int> harmonic_content(const DrivingField& f, int n_max);

/// Largest step <= h that divides T/2 for square drives; h otherwise.
double snap_step(const DrivingField& f, double h);

/// For square drives: switch times strictly inside (t_a, t_b), ascending.
std::vector<double> switch_times(const DrivingField& f, double t_a, double t_b);

}  // namespace ddecoh
