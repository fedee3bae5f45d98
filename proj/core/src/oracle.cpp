#include "ddecoh/oracle.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "ddecoh/error.hpp"

namespace ddecoh {

double LatticeModel::coupling_weight() const {
  return std::inner_product(v_k.begin(), v_k.end(), v_k.begin(), 0.0);
}

LatticeModel discretize(const SpectralDensity& sd, std::size_t n_modes,
                        double eps_s) {
  if (n_modes < 2) throw Error(ErrorKind::Config, "lattice needs at least 2 modes");
  const auto b = band(sd);
  if (b.size() > n_modes) {
    throw Error(ErrorKind::Config, "fewer lattice modes than band intervals");
  }
  double width = 0.0;
  for (const auto& iv : b) width += iv.width();

  // Cells per interval in proportion to width, at least one each; the
  // rounding remainder goes to the widest intervals first.
  std::vector<std::size_t> cells(b.size(), 1);
  std::size_t used = b.size();
  std::vector<double> frac(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double ideal = static_cast<double>(n_modes) * b[i].width() / width;
    const auto whole = static_cast<std::size_t>(std::floor(ideal));
    if (whole > 1) {
      used += whole - 1;
      cells[i] = whole;
    }
    frac[i] = ideal - std::floor(ideal);
  }
  std::vector<std::size_t> order(b.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return frac[x] > frac[y]; });
  for (std::size_t k = 0; used < n_modes; k = (k + 1) % order.size(), ++used) {
    ++cells[order[k]];
  }

  LatticeModel m;
  m.eps_s = eps_s;
  m.eps_k.reserve(n_modes);
  m.v_k.reserve(n_modes);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double de = b[i].width() / static_cast<double>(cells[i]);
    for (std::size_t k = 0; k < cells[i]; ++k) {
      const double e = b[i].lo + (static_cast<double>(k) + 0.5) * de;
      m.eps_k.push_back(e);
      m.v_k.push_back(std::sqrt(eval_j(sd, e) * de / (2.0 * std::numbers::pi)));
    }
  }
  return m;
}

double recurrence_time(const LatticeModel& m) {
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < m.eps_k.size(); ++k) {
    spacing = std::min(spacing, m.eps_k[k + 1] - m.eps_k[k]);
  }
  return 2.0 * std::numbers::pi / spacing;
}

std::vector<double> isolated_levels(const LatticeModel& m, double eps_on) {
  const auto& e = m.eps_k;
  const std::size_t n = e.size();
  if (n == 0) return {eps_on};
  auto f = [&](double x) {
    double s = x - eps_on;
    for (std::size_t k = 0; k < n; ++k) s -= m.v_k[k] * m.v_k[k] / (x - e[k]);
    return s;
  };
  double spacing = (e.back() - e.front()) / static_cast<double>(std::max<std::size_t>(n - 1, 1));
  const double scale = std::max({1.0, std::abs(eps_on), std::sqrt(m.coupling_weight())});
  auto solve = [&](double lo, double hi) {
    std::uintmax_t it = 300;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a)); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, it);
    return 0.5 * (r.first + r.second);
  };

  // Eigenvalues interlace the mode energies; the isolated ones sit below the
  // first mode, above the last, or inside a gap much wider than the typical
  // spacing.
  std::vector<double> out;
  const double nudge = 1e-12 * scale;
  {
    double hi = e.front() - nudge;
    double step = scale;
    double lo = std::min(hi, eps_on) - step;
    while (f(lo) >= 0.0) lo -= (step *= 2.0);
    if (f(hi) > 0.0) out.push_back(solve(lo, hi));
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (e[k + 1] - e[k] > 20.0 * spacing) {
      out.push_back(solve(e[k] + nudge, e[k + 1] - nudge));
    }
  }
  {
    double lo = e.back() + nudge;
    double step = scale;
    double hi = std::max(lo, eps_on) + step;
    while (f(hi) <= 0.0) hi += (step *= 2.0);
    if (f(lo) < 0.0) out.push_back(solve(lo, hi));
  }
  // Levels hugging a mode are part of the quasi-continuum.
  std::vector<double> isolated;
  for (double x : out) {
    const auto it = std::lower_bound(e.begin(), e.end(), x);
    double d = std::numeric_limits<double>::infinity();
    if (it != e.end()) d = std::min(d, *it - x);
    if (it != e.begin()) d = std::min(d, x - *(it - 1));
    if (d > 2.0 * spacing) isolated.push_back(x);
  }
  return isolated;
}

namespace {

/// psi <- exp(-i tau H) psi for the arrowhead H with system energy d0.
/// Returns the number of Taylor terms used.
int apply_exponential(const LatticeModel& m, double d0, double tau,
                      std::vector<cplx>& psi, std::vector<cplx>& term,
                      std::vector<cplx>& next) {
  const std::size_t n = m.eps_k.size();
  term = psi;
  double psi_norm = 0.0;
  for (const auto& z : psi) psi_norm += std::norm(z);
  psi_norm = std::sqrt(psi_norm);
  for (int k = 1; k <= 60; ++k) {
    // next = H term
    double re0 = d0 * term[0].real(), im0 = d0 * term[0].imag();
    for (std::size_t i = 0; i < n; ++i) {
      re0 += m.v_k[i] * term[i + 1].real();
      im0 += m.v_k[i] * term[i + 1].imag();
      next[i + 1] = m.v_k[i] * term[0] + m.eps_k[i] * term[i + 1];
    }
    next[0] = {re0, im0};
    // term = (-i tau / k) next
    const double c = tau / static_cast<double>(k);
    double term_norm = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      term[i] = {c * next[i].imag(), -c * next[i].real()};
      psi[i] += term[i];
      term_norm += std::norm(term[i]);
    }
    if (std::sqrt(term_norm) <= 1e-17 * psi_norm) return k;
  }
  throw Error(ErrorKind::StepTooLarge, "Taylor exponential failed to converge");
}

}  // namespace

OracleRun propagate(const LatticeModel& m, const DrivingField& drive,
                    const TimeGrid& grid, const OracleOptions& opt) {
  drive.validate();
  if (opt.substeps < 1) throw Error(ErrorKind::Config, "substeps must be >= 1");
  const std::size_t n = m.eps_k.size();
  double v_norm = std::sqrt(m.coupling_weight());
  double e_max = 0.0;
  for (double e : m.eps_k) e_max = std::max(e_max, std::abs(e));
  const double d_max = std::abs(m.eps_s + drive.mean) + drive_amplitude(drive);
  const double h_norm = std::max(e_max, d_max) + v_norm;
  const double sub_h = grid.h / static_cast<double>(opt.substeps);
  if (sub_h * h_norm > opt.max_step_norm) {
    throw Error(ErrorKind::StepTooLarge,
                "oracle step " + std::to_string(sub_h) + " times Hamiltonian bound " +
                    std::to_string(h_norm) + " exceeds " + std::to_string(opt.max_step_norm));
  }

  std::vector<cplx> psi(n + 1), term(n + 1), next(n + 1);
  psi[0] = 1.0;
  OracleRun run{{grid, std::vector<cplx>(grid.size())}, 0.0};
  run.trace.values[0] = 1.0;

  auto advance = [&](double a, double b) {
    const double d0 = m.eps_s + eval_drive(drive, 0.5 * (a + b));
    apply_exponential(m, d0, b - a, psi, term, next);
  };

  const double sub = grid.h / static_cast<double>(opt.substeps);
  for (std::size_t k = 0; k < grid.n_steps; ++k) {
    for (int s = 0; s < opt.substeps; ++s) {
      const double a = grid.time(k) + sub * static_cast<double>(s);
      const double b = s + 1 == opt.substeps ? grid.time(k + 1) : a + sub;
      double start = a;
      // Switch points closer than ~1e-9 h to a node are treated as the node.
      for (double ts : switch_times(drive, a + 1e-9 * sub, b - 1e-9 * sub)) {
        advance(start, ts);
        start = ts;
      }
      advance(start, b);
    }
    double norm = 0.0;
    for (const auto& z : psi) norm += std::norm(z);
    run.max_norm_defect = std::max(run.max_norm_defect, std::abs(std::sqrt(norm) - 1.0));
    run.trace.values[k + 1] = psi[0];
  }
  return run;
}

double compare(const PropagatorTrace& a, const PropagatorTrace& b, double t_max) {
  const bool same = a.values.size() == b.values.size() &&
                    std::abs(a.grid.t0 - b.grid.t0) <= 1e-12 * std::max(1.0, std::abs(a.grid.t0)) &&
                    std::abs(a.grid.h - b.grid.h) <= 1e-12 * a.grid.h;
  if (!same) {
    throw Error(ErrorKind::GridMismatch, "traces are sampled on different grids");
  }
  double dev = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    if (a.time(k) > t_max + 1e-9 * a.grid.h) break;
    dev = std::max(dev, std::abs(a.values[k] - b.values[k]));
  }
  return dev;
}

}  // namespace ddecoh
