#include "ddecoh/volterra.hpp"

#include <cmath>
#include <string>

#include "ddecoh/error.hpp"

namespace ddecoh {

namespace {

void check_preconditions(double eps_s, const DrivingField& drive,
                         const TimeGrid& grid, const VolterraOptions& opt) {
  drive.validate();
  if (!(grid.h > 0.0) || !std::isfinite(grid.h)) {
    throw Error(ErrorKind::Config, "time step must be positive and finite");
  }
  if (!is_static(drive) && grid.h * opt.min_samples_per_period > drive.period) {
    throw Error(ErrorKind::StepTooLarge,
                "step " + std::to_string(grid.h) + " under-resolves the drive period " +
                    std::to_string(drive.period));
  }
  const double max_energy = std::abs(eps_s + drive.mean) + drive_amplitude(drive);
  if (grid.h * max_energy > opt.max_phase_step) {
    throw Error(ErrorKind::StepTooLarge,
                "step " + std::to_string(grid.h) + " times max on-site energy " +
                    std::to_string(max_energy) + " exceeds " +
                    std::to_string(opt.max_phase_step));
  }
}

}  // namespace

PropagatorTrace evolve(const MemoryKernel& kernel, double eps_s,
                       const DrivingField& drive, const TimeGrid& grid,
                       const VolterraOptions& opt) {
  check_preconditions(eps_s, drive, grid, opt);
  const std::size_t n_steps = grid.n_steps;
  const double h = grid.h;
  const auto g = kernel.lag_samples(h, n_steps);
  const cplx g0 = g[0];

  // Lag samples stored reversed so the history sum walks both arrays forward:
  // g[m - j] == rev[n_steps - m + j].
  std::vector<double> rev_re(n_steps + 1), rev_im(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) {
    rev_re[n_steps - i] = g[i].real();
    rev_im[n_steps - i] = g[i].imag();
  }

  // u = exp(-i phi) v with phi(t) = int_{t0}^t [eps_s + eps_d].
  const double static_energy = eps_s + drive.mean;
  const double phase0 = drive_phase(drive, grid.t0);
  auto phase = [&](std::size_t k) {
    const double t = grid.time(k);
    return static_energy * (t - grid.t0) + drive_phase(drive, t) - phase0;
  };

  std::vector<double> ur(n_steps + 1), ui(n_steps + 1);
  PropagatorTrace out{grid, std::vector<cplx>(n_steps + 1)};
  ur[0] = 1.0;
  ui[0] = 0.0;
  out.values[0] = 1.0;

  cplx v = 1.0;
  cplx f_prev{};
  cplx f_cur{};  // v'(t_0) = 0 since the memory integral starts empty
  for (std::size_t n = 0; n < n_steps; ++n) {
    const std::size_t m = n + 1;
    const double* gr = rev_re.data() + (n_steps - m);
    const double* gi = rev_im.data() + (n_steps - m);

    double s_re[4] = {0.0, 0.0, 0.0, 0.0};
    double s_im[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t j = 1;
    for (; j + 3 <= n; j += 4) {
      for (std::size_t l = 0; l < 4; ++l) {
        const double a = gr[j + l], b = gi[j + l];
        const double c = ur[j + l], d = ui[j + l];
        s_re[l] += a * c - b * d;
        s_im[l] += a * d + b * c;
      }
    }
    for (std::size_t l = 0; j <= n; ++j, ++l) {
      const double a = gr[j], b = gi[j];
      const double c = ur[j], d = ui[j];
      s_re[l] += a * c - b * d;
      s_im[l] += a * d + b * c;
    }
    const cplx history =
        h * (0.5 * cplx(gr[0], gi[0]) +  // u_0 = 1
             cplx((s_re[0] + s_re[1]) + (s_re[2] + s_re[3]),
                  (s_im[0] + s_im[1]) + (s_im[2] + s_im[3])));

    const double phi = phase(m);
    const cplx rot(std::cos(phi), -std::sin(phi));  // exp(-i phi)
    const cplx rotated = std::conj(rot) * history;
    const cplx self = 0.5 * h * g0;

    const cplx predicted = n == 0 ? v + h * f_cur : v + h * (1.5 * f_cur - 0.5 * f_prev);
    const cplx f_pred = -(rotated + self * predicted);
    const cplx v_next = v + 0.5 * h * (f_cur + f_pred);
    const cplx f_next = -(rotated + self * v_next);

    const cplx u = rot * v_next;
    ur[m] = u.real();
    ui[m] = u.imag();
    out.values[m] = u;
    v = v_next;
    f_prev = f_cur;
    f_cur = f_next;
  }
  return out;
}

ConvergenceResult convergence_check(const MemoryKernel& kernel, double eps_s,
                                    const DrivingField& drive,
                                    const TimeGrid& grid, double tolerance,
                                    const VolterraOptions& opt) {
  const PropagatorTrace coarse = evolve(kernel, eps_s, drive, grid, opt);
  const TimeGrid fine_grid{grid.t0, 0.5 * grid.h, 2 * grid.n_steps};
  ConvergenceResult res{evolve(kernel, eps_s, drive, fine_grid, opt), 0.0};
  for (std::size_t k = 0; k < coarse.values.size(); ++k) {
    res.error_estimate =
        std::max(res.error_estimate, std::abs(coarse.values[k] - res.trace.values[2 * k]));
  }
  if (res.error_estimate > tolerance) {
    throw Error(ErrorKind::StepTooLarge,
                "step-halving disagreement " + std::to_string(res.error_estimate) +
                    " exceeds tolerance " + std::to_string(tolerance));
  }
  return res;
}

}  // namespace ddecoh
