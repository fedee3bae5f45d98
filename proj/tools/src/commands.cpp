#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "config.hpp"
#include "ddecoh/comb.hpp"
#include "ddecoh/error.hpp"
#include "ddecoh/oracle.hpp"
#include "ddecoh/scenario.hpp"
#include "ddecoh/spectral.hpp"
#include "ddecoh/sweep.hpp"
#include "ddecoh/volterra.hpp"

namespace ddecoh::cli {

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

/// Writes through `<path>.partial` and renames on success, so an aborted run
/// never leaves a file that looks complete.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".partial";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::Config, "cannot write " + tmp.string());
    body(os);
    if (!os) throw Error(ErrorKind::Config, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

json bound_json(const std::vector<BoundState>& states) {
  json a = json::array();
  for (const auto& b : states) a.push_back({{"energy", b.energy}, {"amplitude", b.amplitude}});
  return a;
}

json metadata(const std::string& command, const RunConfig& c, const PropagatorTrace& tr,
              std::optional<double> error_estimate) {
  return {{"command", command},
          {"h", tr.grid.h},
          {"error_estimate", error_estimate ? json(*error_estimate) : json(nullptr)},
          {"config", to_json(c)}};
}

std::string trace_path(const RunConfig& c, const std::string& suffix, const char* ext) {
  return c.prefix + suffix + ext;
}

json emit_trace(const RunConfig& c, const std::string& command, const std::string& suffix,
                const PropagatorTrace& tr, std::optional<double> error_estimate,
                const std::vector<SvgCurve>& extra, const std::string& title) {
  const PropagatorTrace thin = tr.decimate(c.stride);
  const std::string csv = trace_path(c, suffix, ".csv");
  write_file(csv, [&](std::ostream& os) {
    write_trace_csv(os, thin, metadata(command, c, tr, error_estimate).dump());
  });
  json files{{"trace", csv}};
  if (c.svg) {
    const std::string svg = trace_path(c, suffix, ".svg");
    std::vector<SvgCurve> curves{{"|u(t)|", "#c0392b", &thin, false}};
    curves.insert(curves.end(), extra.begin(), extra.end());
    write_file(svg, [&](std::ostream& os) { write_abs_svg(os, curves, title); });
    files["svg"] = svg;
  }
  return files;
}

int cmd_bound_states(const RunConfig& c, std::ostream& out) {
  out << bound_json(find_bound_states(c.scenario.density, c.scenario.eps_on())).dump(2) << "\n";
  return 0;
}

int cmd_u0(const RunConfig& c, std::ostream& out) {
  const auto& sc = c.scenario;
  const auto tr = compute_u0(sc.density, sc.eps_on(), sc.grid());
  json report = emit_trace(c, "u0", "_u0", tr, std::nullopt, {}, "|u0(t)|, no driving");
  report["points"] = tr.values.size();
  report["abs_u_final"] = std::abs(tr.values.back());
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_evolve(const RunConfig& c, std::ostream& out) {
  const auto& sc = c.scenario;
  const auto res = run_scenario(sc, c.comb, c.convergence, c.convergence_tol);
  std::vector<SvgCurve> extra;
  PropagatorTrace u0;
  if (c.u0_overlay) {
    u0 = compute_u0(sc.density, sc.eps_on(), res.trace.decimate(c.stride).grid);
    extra.push_back({"|u0(t)|", "#2c3e50", &u0, true});
  }
  json report = emit_trace(c, "evolve", "", res.trace, res.error_estimate, extra, "|u(t)| under driving");
  report["points"] = res.trace.values.size();
  report["h"] = res.trace.grid.h;
  report["abs_u_final"] = std::abs(res.trace.values.back());
  report["error_estimate"] = res.error_estimate ? json(*res.error_estimate) : json(nullptr);
  report["bound_states"] = bound_json(res.bound);
  if (c.window.hi <= res.trace.grid.t_end() + 1e-9 * res.trace.grid.h) {
    report["survival_metric"] = survival_metric(res.trace, c.window);
  }
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_comb(const RunConfig& c, std::ostream& out) {
  const auto& sc = c.scenario;
  const auto bound = find_bound_states(sc.density, sc.eps_on());
  const auto bands = band(sc.density);
  out << to_json(comb_report(bound, sc.drive, bands, c.comb), 2) << "\n";
  return 0;
}

int cmd_oracle_compare(const RunConfig& c, std::ostream& out) {
  const auto& sc = c.scenario;
  const auto grid = sc.grid();
  const auto volterra = evolve(sc.make_kernel(), sc.eps_s, sc.drive, grid);
  const auto model = discretize(sc.density, c.oracle_modes, sc.eps_s);
  OracleOptions opt;
  opt.substeps = c.oracle_substeps;
  const auto run = propagate(model, sc.drive, grid, opt);
  json report = emit_trace(c, "oracle-compare", "_oracle", run.trace, std::nullopt, {}, "|u(t)|, discretized reservoir");
  const double recurrence = recurrence_time(model);
  report["max_deviation"] = compare(volterra, run.trace);
  report["n_modes"] = c.oracle_modes;
  report["t_max"] = grid.t_end();
  report["recurrence_time"] = recurrence;
  report["within_recurrence"] = grid.t_end() < recurrence;
  report["max_norm_defect"] = run.max_norm_defect;
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  const SweepSpec spec = make_sweep_spec(c);
  const auto res = run_sweep(spec);
  out << json{{"output", spec.output.string()},
              {"points", spec.n_points()},
              {"resumed_rows", res.resumed_rows},
              {"written_rows", res.written_rows},
              {"complete", res.complete},
              {"fingerprint", spec_fingerprint(spec)}}
             .dump(2)
      << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Driven level coupled to a structured reservoir: bound states, propagators, comb analysis"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> overrides;

  using Handler = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands{
      {"bound-states", "list bound states of the undriven level as JSON", cmd_bound_states},
      {"u0", "undriven propagator from the spectral representation", cmd_u0},
      {"evolve", "driven propagator; writes a CSV trace and an SVG plot", cmd_evolve},
      {"comb", "frequency-comb survival report as JSON", cmd_comb},
      {"oracle-compare", "compare the solver against a discretized reservoir", cmd_oracle_compare},
      {"sweep", "resumable parameter sweep written as CSV", cmd_sweep},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON config file");
    sub->add_option("-s,--set", overrides, "override, e.g. drive.period=1.32")->take_all();
    subs.push_back(sub);
  }

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  if (!argv_rev.empty()) argv_rev.pop_back();
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      for (auto* s : subs) {
        if (s->parsed()) out << s->help();
      }
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    const RunConfig cfg = load_config(config_path, overrides);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return std::get<2>(commands[i])(cfg, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::Config ? kExitConfig : kExitNumerical;
  } catch (const json::exception& e) {
    err << "error (config): " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace ddecoh::cli
