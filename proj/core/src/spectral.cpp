#include "ddecoh/spectral.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ddecoh/error.hpp"
#include "quadrature.hpp"

namespace ddecoh {

using detail::kTwoPi;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double semicircle_j(const Semicircle& sc, double eps) {
  const double x = eps - sc.eps0;
  const double r = 2.0 * sc.v0;
  if (std::abs(x) > r) return 0.0;
  return sc.eta * sc.eta * std::sqrt(std::max(0.0, r * r - x * x));
}

double semicircle_delta(const Semicircle& sc, double eps) {
  const double x = eps - sc.eps0;
  const double r = 2.0 * sc.v0;
  const double half = 0.5 * sc.eta * sc.eta;
  if (std::abs(x) <= r) return half * x;
  return half * (x - std::copysign(std::sqrt(x * x - r * r), x));
}

double distance_to_band(const std::vector<Interval>& b, double eps) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : b) {
    if (iv.contains(eps)) return 0.0;
    d = std::min({d, std::abs(eps - iv.lo), std::abs(eps - iv.hi)});
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------- Tabulated

Tabulated::Tabulated(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size() || grid_.size() < 2) {
    throw Error(ErrorKind::Config,
                "tabulated spectral density needs >= 2 (energy, J) rows");
  }
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i]) ||
        values_[i] < 0.0) {
      throw Error(ErrorKind::Config,
                  "tabulated spectral density has a non-finite or negative entry");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw Error(ErrorKind::Config,
                  "tabulated energies must be strictly ascending");
    }
  }
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    if (values_[i] <= 0.0 && values_[i + 1] <= 0.0) continue;
    if (!band_.empty() && band_.back().hi == grid_[i]) {
      band_.back().hi = grid_[i + 1];
    } else {
      band_.push_back({grid_[i], grid_[i + 1]});
    }
  }
}

Tabulated Tabulated::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Config,
                "cannot open spectral density table " + path.string());
  }
  std::vector<double> x, y;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double e = 0.0, j = 0.0;
    if (!(row >> e)) continue;
    if (!(row >> j)) {
      throw Error(ErrorKind::Config, path.string() + ":" +
                                         std::to_string(line_no) +
                                         ": expected two columns");
    }
    x.push_back(e);
    y.push_back(j);
  }
  return Tabulated(std::move(x), std::move(y));
}

double Tabulated::operator()(double eps) const {
  if (!(eps >= grid_.front() && eps <= grid_.back())) return 0.0;
  auto it = std::upper_bound(grid_.begin(), grid_.end(), eps);
  if (it == grid_.end()) return values_.back();
  const auto i = static_cast<std::size_t>(it - grid_.begin());
  const double x0 = grid_[i - 1], x1 = grid_[i];
  const double t = (eps - x0) / (x1 - x0);
  return (1.0 - t) * values_[i - 1] + t * values_[i];
}

// ----------------------------------------------------------- free functions

std::vector<Interval> band(const SpectralDensity& sd) {
  return std::visit(
      overloaded{
          [](const Semicircle& sc) {
            return std::vector<Interval>{
                {sc.eps0 - 2.0 * sc.v0, sc.eps0 + 2.0 * sc.v0}};
          },
          [](const Tabulated& t) { return t.band(); },
      },
      sd);
}

double total_weight(const SpectralDensity& sd) {
  return std::visit(
      overloaded{
          [](const Semicircle& sc) { return sc.eta * sc.eta * sc.v0 * sc.v0; },
          [](const Tabulated& t) {
            double s = 0.0;
            const auto& x = t.grid();
            const auto& y = t.values();
            for (std::size_t i = 0; i + 1 < x.size(); ++i) {
              s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
            }
            return s / kTwoPi;
          },
      },
      sd);
}

bool is_decoupled(const SpectralDensity& sd) { return total_weight(sd) == 0.0; }

double eval_j(const SpectralDensity& sd, double eps) {
  return std::visit(
      overloaded{
          [eps](const Semicircle& sc) { return semicircle_j(sc, eps); },
          [eps](const Tabulated& t) { return t(eps); },
      },
      sd);
}

namespace {

// (J(x) - J(eps)) / (eps - x) without the cancellation of the naive form.
double j_quotient(const SpectralDensity& sd, double x, double eps) {
  return std::visit(
      overloaded{
          [&](const Semicircle& sc) {
            const double r = 2.0 * sc.v0;
            const double a = x - sc.eps0, b = eps - sc.eps0;
            if (std::abs(a) <= r && std::abs(b) <= r) {
              const double den = std::sqrt(r * r - a * a) + std::sqrt(r * r - b * b);
              if (den > 0.0) return sc.eta * sc.eta * (a + b) / den;
            }
            return x == eps ? 0.0 : (semicircle_j(sc, x) - semicircle_j(sc, eps)) / (eps - x);
          },
          [&](const Tabulated& t) {
            const auto& g = t.grid();
            const auto& v = t.values();
            auto it = std::upper_bound(g.begin(), g.end(), eps);
            if (it != g.begin() && it != g.end()) {
              const auto i = static_cast<std::size_t>(it - g.begin());
              if (x >= g[i - 1] && x <= g[i]) return -(v[i] - v[i - 1]) / (g[i] - g[i - 1]);
            }
            return x == eps ? 0.0 : (t(x) - t(eps)) / (eps - x);
          },
      },
      sd);
}

// Exact principal value for the piecewise-linear table. Each cell gives
// L(eps) ln|(eps - x0) / (eps - x1)| - (y1 - y0), with L the cell's line;
// collecting the logs per node keeps eps on a node finite.
double tabulated_pv(const Tabulated& t, double eps) {
  const auto& x = t.grid();
  const auto& y = t.values();
  const std::size_t n = x.size();
  auto slope = [&](std::size_t c) { return (y[c + 1] - y[c]) / (x[c + 1] - x[c]); };
  double sum = y.front() - y.back();
  for (std::size_t i = 0; i < n; ++i) {
    const double b_r = i + 1 < n ? slope(i) : 0.0;
    const double b_l = i > 0 ? slope(i - 1) : 0.0;
    const double edge = i == 0 ? y[i] : (i + 1 == n ? -y[i] : 0.0);
    const double d = eps - x[i];
    if (d == 0.0) {
      if (edge != 0.0) {
        throw Error(ErrorKind::QuadratureFailure,
                    "principal value diverges at a band edge with J > 0");
      }
      continue;
    }
    sum += (edge + (b_r - b_l) * d) * std::log(std::abs(d));
  }
  return sum / kTwoPi;
}

}  // namespace

double self_energy_pv(const SpectralDensity& sd, double eps,
                      const SpectralOptions& opt) {
  if (is_decoupled(sd)) return 0.0;
  if (const auto* t = std::get_if<Tabulated>(&sd)) return tabulated_pv(*t, eps);
  const double j_eps = eval_j(sd, eps);
  auto subtracted = [&](double x) { return j_quotient(sd, x, eps); };
  auto plain = [&](double x) { return eval_j(sd, x) / (eps - x); };

  // Band intervals are tiled exactly by the smooth pieces. Only the
  // interval holding eps needs the subtraction; it contributes the log term
  // J(eps) ln((eps - lo) / (hi - eps)) in exchange.
  double sum = 0.0;
  const auto pieces = detail::smooth_pieces(sd);
  for (const auto& iv : band(sd)) {
    const bool holds = eps > iv.lo && eps < iv.hi;
    if ((eps == iv.lo || eps == iv.hi) && j_eps > 0.0) {
      throw Error(ErrorKind::QuadratureFailure,
                  "principal value diverges at a band edge with J > 0");
    }
    if (holds) sum += j_eps * std::log((eps - iv.lo) / (iv.hi - eps));
    for (const auto& piece : pieces) {
      if (piece.lo < iv.lo || piece.hi > iv.hi) continue;
      if (!holds) {
        sum += detail::integrate_cos(plain, piece.lo, piece.hi, opt.quad_tol);
      } else if (eps > piece.lo && eps < piece.hi) {
        sum += detail::integrate_cos(subtracted, piece.lo, eps, opt.quad_tol);
        sum += detail::integrate_cos(subtracted, eps, piece.hi, opt.quad_tol);
      } else {
        sum += detail::integrate_cos(subtracted, piece.lo, piece.hi,
                                     opt.quad_tol);
      }
    }
  }
  return sum / kTwoPi;
}

SelfEnergyValue self_energy(const SpectralDensity& sd, double eps,
                            const SpectralOptions& opt) {
  return std::visit(
      overloaded{
          [eps](const Semicircle& sc) {
            return SelfEnergyValue{semicircle_delta(sc, eps),
                                   semicircle_j(sc, eps)};
          },
          [&](const Tabulated& t) {
            return SelfEnergyValue{self_energy_pv(sd, eps, opt), t(eps)};
          },
      },
      sd);
}

double self_energy_derivative(const SpectralDensity& sd, double eps,
                              const SpectralOptions& opt) {
  if (is_decoupled(sd)) return 0.0;
  const auto b = band(sd);
  const double d = distance_to_band(b, eps);
  if (d < opt.edge_collar) {
    throw Error(ErrorKind::TooCloseToBandEdge,
                "Delta'(e) requested within " + std::to_string(opt.edge_collar) +
                    " of the band (distance " + std::to_string(d) + ")");
  }
  if (const auto* sc = std::get_if<Semicircle>(&sd)) {
    const double x = eps - sc->eps0;
    const double r = 2.0 * sc->v0;
    return 0.5 * sc->eta * sc->eta *
           (1.0 - std::abs(x) / std::sqrt(x * x - r * r));
  }
  // Central differences at step s and s/2 combined by Richardson
  // extrapolation; the step scales with the distance to the nearest edge,
  // which sets the curvature scale of Delta.
  const double s = 1e-2 * std::min(d, 1.0);
  auto delta = [&](double x) { return self_energy(sd, x, opt).delta; };
  const double d1 = (delta(eps + s) - delta(eps - s)) / (2.0 * s);
  const double d2 = (delta(eps + 0.5 * s) - delta(eps - 0.5 * s)) / s;
  return (4.0 * d2 - d1) / 3.0;
}

std::vector<BoundState> find_bound_states(const SpectralDensity& sd,
                                          double eps_on,
                                          const SpectralOptions& opt) {
  if (!std::isfinite(eps_on)) {
    throw Error(ErrorKind::Config, "on-site energy must be finite");
  }
  if (is_decoupled(sd)) return {BoundState{eps_on, 1.0}};

  auto f = [&](double x) { return x - eps_on - self_energy(sd, x, opt).delta; };
  const auto b = band(sd);
  const double scale = std::max(
      {1.0, std::abs(eps_on), std::sqrt(total_weight(sd)),
       std::abs(b.front().lo), std::abs(b.back().hi)});

  struct Bracket {
    double lo, hi;
  };
  std::vector<Bracket> brackets;

  // f is strictly increasing on every gap because Delta' < 0 there, so each
  // gap holds at most one root.
  {
    double hi = b.front().lo - opt.edge_collar;
    if (f(hi) > 0.0) {
      double step = scale;
      double lo = std::min(hi, eps_on) - step;
      while (f(lo) >= 0.0) {
        step *= 2.0;
        lo -= step;
      }
      brackets.push_back({lo, hi});
    }
  }
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double lo = b[i].hi + opt.edge_collar;
    const double hi = b[i + 1].lo - opt.edge_collar;
    if (lo < hi && f(lo) < 0.0 && f(hi) > 0.0) brackets.push_back({lo, hi});
  }
  {
    double lo = b.back().hi + opt.edge_collar;
    if (f(lo) < 0.0) {
      double step = scale;
      double hi = std::max(lo, eps_on) + step;
      while (f(hi) <= 0.0) {
        step *= 2.0;
        hi += step;
      }
      brackets.push_back({lo, hi});
    }
  }

  std::vector<BoundState> out;
  for (const auto& br : brackets) {
    std::uintmax_t max_iter = 400;
    auto tol = [&](double a, double c) { return std::abs(c - a) <= opt.root_tol; };
    const auto [a, c] = boost::math::tools::toms748_solve(f, br.lo, br.hi, tol, max_iter);
    const double root = std::abs(f(a)) <= std::abs(f(c)) ? a : c;
    const double dprime = self_energy_derivative(sd, root, opt);
    out.push_back({root, 1.0 / (1.0 - dprime)});
  }
  return out;
}

// ----------------------------------------------------------- SystemSpectrum

SystemSpectrum::SystemSpectrum(SpectralDensity sd, double eps_on,
                               const SpectralOptions& opt)
    : sd_(std::move(sd)), eps_on_(eps_on), opt_(opt) {
  bound_ = find_bound_states(sd_, eps_on_, opt_);
}

double SystemSpectrum::band_part(double eps) const {
  const auto se = self_energy(sd_, eps, opt_);
  if (!(se.j > 0.0)) return 0.0;
  const double detuning = eps - eps_on_ - se.delta;
  return se.j / (detuning * detuning + 0.25 * se.j * se.j);
}

double SystemSpectrum::band_weight() const {
  if (is_decoupled(sd_)) return 0.0;
  double sum = 0.0;
  auto f = [this](double x) { return band_part(x); };
  for (const auto& piece : detail::smooth_pieces(sd_)) {
    sum += detail::integrate_cos(f, piece.lo, piece.hi, opt_.quad_tol);
  }
  return sum / kTwoPi;
}

double SystemSpectrum::sum_rule() const {
  double z = 0.0;
  for (const auto& bs : bound_) z += bs.amplitude;
  return z + band_weight();
}

SystemSpectrum spectrum(const SpectralDensity& sd, double eps_on,
                        const SpectralOptions& opt) {
  return SystemSpectrum(sd, eps_on, opt);
}

// ---------------------------------------------------------------- u0(t)

PropagatorTrace compute_u0(const SpectralDensity& sd, double eps_on,
                           const TimeGrid& grid, const SpectralOptions& opt) {
  if (!(grid.h > 0.0)) throw Error(ErrorKind::Config, "time step must be positive");
  PropagatorTrace out{grid, std::vector<cplx>(grid.size())};
  const SystemSpectrum spec(sd, eps_on, opt);

  // Discrete part: bound states, or the bare level when decoupled.
  std::vector<double> energy;
  std::vector<double> weight;
  for (const auto& bs : spec.bound()) {
    energy.push_back(bs.energy);
    weight.push_back(bs.amplitude);
  }
  if (!is_decoupled(sd)) {
    detail::BandNodes nodes;
    const double t_span = grid.t_end() - grid.t0;
    auto f = [&spec](double x) { return spec.band_part(x) / kTwoPi; };
    for (const auto& piece : detail::smooth_pieces(sd)) {
      detail::append_band_nodes(nodes, f, piece, t_span, opt.quad_tol);
    }
    energy.insert(energy.end(), nodes.energy.begin(), nodes.energy.end());
    weight.insert(weight.end(), nodes.weight.begin(), nodes.weight.end());
  }

  // Phases advance by a fixed rotation per step and are re-seeded exactly
  // every kReseed steps to bound round-off drift.
  constexpr std::size_t kReseed = 256;
  const std::size_t m = energy.size();
  std::vector<double> pr(m), pi(m), sr(m), si(m);
  for (std::size_t j = 0; j < m; ++j) {
    sr[j] = std::cos(energy[j] * grid.h);
    si[j] = -std::sin(energy[j] * grid.h);
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (k % kReseed == 0) {
      const double tau = static_cast<double>(k) * grid.h;
      for (std::size_t j = 0; j < m; ++j) {
        pr[j] = std::cos(energy[j] * tau);
        pi[j] = -std::sin(energy[j] * tau);
      }
    }
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      re += weight[j] * pr[j];
      im += weight[j] * pi[j];
      const double nr = pr[j] * sr[j] - pi[j] * si[j];
      pi[j] = pr[j] * si[j] + pi[j] * sr[j];
      pr[j] = nr;
    }
    out.values[k] = {re, im};
  }
  if (!out.values.empty()) out.values[0] = 1.0;
  return out;
}

}  // namespace ddecoh
