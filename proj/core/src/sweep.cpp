#include "ddecoh/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>
#include <variant>

#include "ddecoh/error.hpp"

namespace ddecoh {

const char* to_string(SweepParam p) noexcept {
  switch (p) {
    case SweepParam::Amplitude: return "A";
    case SweepParam::Period: return "T";
    case SweepParam::MeanDrive: return "eps_d";
    case SweepParam::Eta: return "eta";
  }
  return "?";
}

SweepParam parse_sweep_param(const std::string& name) {
  for (auto p : {SweepParam::Amplitude, SweepParam::Period, SweepParam::MeanDrive, SweepParam::Eta}) {
    if (name == to_string(p)) return p;
  }
  throw Error(ErrorKind::Config, "unknown sweep parameter '" + name + "' (use A, T, eps_d or eta)");
}

void SweepSpec::validate() const {
  base.validate();
  if (axes.empty() || axes.size() > 2) throw Error(ErrorKind::Config, "a sweep takes one or two axes");
  for (const auto& ax : axes) {
    if (ax.values.empty()) throw Error(ErrorKind::Config, "sweep axis has no points");
    for (double v : ax.values) {
      if (!std::isfinite(v)) throw Error(ErrorKind::Config, "sweep axis values must be finite");
    }
    if (ax.param == SweepParam::Eta && !std::holds_alternative<Semicircle>(base.density)) {
      throw Error(ErrorKind::Config, "the eta axis needs a semicircle density");
    }
    if (ax.param == SweepParam::Amplitude && is_static(base.drive) &&
        std::holds_alternative<Harmonics>(base.drive.shape)) {
      throw Error(ErrorKind::Config, "cannot scale the amplitude of an all-zero harmonic drive");
    }
  }
  if (axes.size() == 2 && axes[0].param == axes[1].param) {
    throw Error(ErrorKind::Config, "sweep axes must differ");
  }
  if (!(window.hi > window.lo) || window.lo < 0.0 || window.hi > base.t_max) {
    throw Error(ErrorKind::Config, "metric window must lie inside [0, t_max]");
  }
  if (output.empty()) throw Error(ErrorKind::Config, "sweep output path is empty");
}

std::size_t SweepSpec::n_points() const {
  std::size_t n = 1;
  for (const auto& ax : axes) n *= ax.values.size();
  return n;
}

std::vector<double> sweep_coordinates(const SweepSpec& spec, std::size_t index) {
  std::vector<double> out(spec.axes.size());
  for (std::size_t a = spec.axes.size(); a-- > 0;) {
    const auto& vals = spec.axes[a].values;
    out[a] = vals[index % vals.size()];
    index /= vals.size();
  }
  return out;
}

namespace {

void set_amplitude(DrivingField& d, double a) {
  std::visit(
      [&](auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Harmonics>) {
          const double now = drive_amplitude(d);
          for (auto& t : s.terms) {
            t.a *= a / now;
            t.b *= a / now;
          }
        } else {
          s.amplitude = a;
        }
      },
      d.shape);
}

}  // namespace

Scenario sweep_point(const SweepSpec& spec, std::size_t index) {
  Scenario sc = spec.base;
  const auto coords = sweep_coordinates(spec, index);
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    const double v = coords[a];
    switch (spec.axes[a].param) {
      case SweepParam::Amplitude: set_amplitude(sc.drive, v); break;
      case SweepParam::Period: sc.drive.period = v; break;
      case SweepParam::MeanDrive: sc.drive.mean = v; break;
      case SweepParam::Eta: std::get<Semicircle>(sc.density).eta = v; break;
    }
  }
  return sc;
}

namespace {

std::string canonical(const SweepSpec& spec) {
  fmt::memory_buffer b;
  auto out = std::back_inserter(b);
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, Semicircle>) {
          fmt::format_to(out, "semicircle {} {} {};", d.eta, d.eps0, d.v0);
        } else {
          fmt::format_to(out, "tabulated");
          for (std::size_t i = 0; i < d.grid().size(); ++i) {
            fmt::format_to(out, " {} {}", d.grid()[i], d.values()[i]);
          }
          fmt::format_to(out, ";");
        }
      },
      spec.base.density);
  const auto& dr = spec.base.drive;
  fmt::format_to(out, "eps_s {};drive {} {} ", spec.base.eps_s, dr.mean, dr.period);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Sine>) {
          fmt::format_to(out, "sine {}", s.amplitude);
        } else if constexpr (std::is_same_v<S, Square>) {
          fmt::format_to(out, "square {}", s.amplitude);
        } else {
          fmt::format_to(out, "harmonics");
          for (const auto& t : s.terms) fmt::format_to(out, " {} {}", t.a, t.b);
        }
      },
      dr.shape);
  fmt::format_to(out, ";grid {} {};kernel {};", spec.base.t_max, spec.base.h,
                 spec.base.kernel == KernelKind::Analytic ? "analytic" : "quadrature");
  for (const auto& ax : spec.axes) {
    fmt::format_to(out, "axis {}", to_string(ax.param));
    for (double v : ax.values) fmt::format_to(out, " {}", v);
    fmt::format_to(out, ";");
  }
  fmt::format_to(out, "window {} {};comb {} {};convergence {} {}", spec.window.lo, spec.window.hi,
                 spec.comb.n_max,
                 spec.comb.strong_threshold ? fmt::format("{}", *spec.comb.strong_threshold) : "auto",
                 spec.convergence, spec.convergence_tol);
  return fmt::to_string(b);
}

}  // namespace

std::string spec_fingerprint(const SweepSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : canonical(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

SweepRow evaluate_point(const SweepSpec& spec, std::size_t index) {
  SweepRow row;
  row.axis_values = sweep_coordinates(spec, index);
  row.metric = std::numeric_limits<double>::quiet_NaN();
  row.error_estimate = std::numeric_limits<double>::quiet_NaN();
  try {
    const Scenario sc = sweep_point(spec, index);
    const auto res = run_scenario(sc, spec.comb, spec.convergence,
                                  std::numeric_limits<double>::infinity());
    if (res.comb.states.empty()) {
      row.prediction = "none";
    } else {
      const bool any = std::any_of(res.comb.states.begin(), res.comb.states.end(),
                                   [](const auto& s) { return s.prediction == Prediction::Survives; });
      row.prediction = to_string(any ? Prediction::Survives : Prediction::Dissipates);
      for (const auto& s : res.comb.states) {
        if (s.min_order && (!row.min_order || *s.min_order < *row.min_order)) row.min_order = s.min_order;
      }
    }
    row.metric = survival_metric(res.trace, spec.window);
    row.status = "ok";
    if (res.error_estimate) {
      row.error_estimate = *res.error_estimate;
      if (*res.error_estimate > spec.convergence_tol) {
        row.status = std::string("error:") + to_string(ErrorKind::StepTooLarge);
      }
    }
  } catch (const Error& e) {
    row.status = std::string("error:") + to_string(e.kind());
  } catch (const std::exception&) {
    row.status = "error:internal";
  }
  return row;
}

std::string csv_header(const SweepSpec& spec) {
  std::string s;
  for (const auto& ax : spec.axes) s += std::string(to_string(ax.param)) + ",";
  return s + "prediction,min_order,metric,error_estimate,status";
}

namespace {

std::string number(double v) { return std::isfinite(v) ? fmt::format("{}", v) : std::string(); }

}  // namespace

std::string csv_row(const SweepRow& row) {
  std::string s;
  for (double v : row.axis_values) s += fmt::format("{},", v);
  s += row.prediction + ",";
  if (row.min_order) s += std::to_string(*row.min_order);
  s += "," + number(row.metric) + "," + number(row.error_estimate) + "," + row.status;
  return s;
}

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  auto p = out;
  p += ".json";
  return p;
}

/// Counts complete data rows of an existing table and drops any partial tail.
std::size_t recover_table(const SweepSpec& spec, const std::string& fingerprint) {
  const auto side = sidecar_path(spec.output);
  std::ifstream sj(side);
  if (!sj) throw Error(ErrorKind::Config, "existing table " + spec.output.string() + " has no sidecar");
  nlohmann::json meta;
  try {
    sj >> meta;
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::Config, "unreadable sidecar " + side.string());
  }
  if (meta.value("fingerprint", std::string()) != fingerprint) {
    throw Error(ErrorKind::Config,
                "existing table " + spec.output.string() + " was produced by a different sweep");
  }
  std::ifstream in(spec.output, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  const auto keep = text.rfind('\n');
  const std::size_t kept = keep == std::string::npos ? 0 : keep + 1;
  const std::string header = csv_header(spec) + "\n";
  if (kept < header.size() || text.compare(0, header.size(), header) != 0) {
    std::ofstream(spec.output, std::ios::binary | std::ios::trunc) << header;
    return 0;
  }
  std::filesystem::resize_file(spec.output, kept);
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(kept), '\n')) - 1;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SweepControl& control) {
  spec.validate();
  const std::string fp = spec_fingerprint(spec);
  const std::size_t n = spec.n_points();
  SweepResult result;

  if (std::filesystem::exists(spec.output)) {
    result.resumed_rows = std::min(recover_table(spec, fp), n);
  } else {
    if (spec.output.has_parent_path()) std::filesystem::create_directories(spec.output.parent_path());
    nlohmann::ordered_json meta{{"fingerprint", fp}, {"points", n}, {"columns", csv_header(spec)}};
    std::ofstream(sidecar_path(spec.output)) << meta.dump(2) << "\n";
    std::ofstream(spec.output, std::ios::binary | std::ios::trunc) << csv_header(spec) << "\n";
  }

  std::size_t end = n;
  if (control.stop_after) end = std::min(n, result.resumed_rows + *control.stop_after);
  const std::size_t begin = result.resumed_rows;

  std::ofstream out(spec.output, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorKind::Config, "cannot write " + spec.output.string());

  unsigned n_threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, std::max<std::size_t>(end - begin, 1)));

  std::mutex mu;
  std::condition_variable ready;
  std::map<std::size_t, SweepRow> done;
  std::atomic<std::size_t> next{begin};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < end;) {
      SweepRow row = evaluate_point(spec, i);
      {
        std::lock_guard lock(mu);
        done.emplace(i, std::move(row));
      }
      ready.notify_one();
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);

  // Writer: emit rows strictly in spec order.
  for (std::size_t i = begin; i < end; ++i) {
    SweepRow row;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return done.count(i) > 0; });
      row = std::move(done[i]);
      done.erase(i);
    }
    out << csv_row(row) << "\n";
    out.flush();
    ++result.written_rows;
  }
  result.complete = end == n;
  return result;
}

}  // namespace ddecoh
