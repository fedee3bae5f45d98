#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "ddecoh/error.hpp"

namespace ddecoh::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!ok.count(k)) bad("unknown key '" + k + "' in " + (where.empty() ? "config" : where));
  }
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) bad("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad("'" + key + "' must be finite");
  return v;
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const auto& v = obj.at(key);
  const std::string name = where + "." + key;
  if constexpr (std::is_same_v<T, double>) {
    out = number(v, name);
  } else if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) bad("'" + name + "' must be true or false");
    out = v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) bad("'" + name + "' must be a string");
    out = v.get<std::string>();
  } else {
    if (!v.is_number_integer() && !v.is_number_unsigned()) bad("'" + name + "' must be an integer");
    const auto i = v.get<long long>();
    if (i < 0) bad("'" + name + "' must not be negative");
    out = static_cast<T>(i);
  }
}

SpectralDensity parse_density(const json& j, const std::filesystem::path& base_dir,
                              std::string& file) {
  std::string type = "semicircle";
  if (j.contains("type")) read(j, "type", type, "spectral_density");
  if (type == "semicircle") {
    check_keys(j, "spectral_density", {"type", "eta", "eps0", "v0"});
    Semicircle sc{1.0, 0.0, 1.0};
    read(j, "eta", sc.eta, "spectral_density");
    read(j, "eps0", sc.eps0, "spectral_density");
    read(j, "v0", sc.v0, "spectral_density");
    file.clear();
    return sc;
  }
  if (type == "tabulated") {
    check_keys(j, "spectral_density", {"type", "file"});
    read(j, "file", file, "spectral_density");
    if (file.empty()) bad("tabulated spectral density needs 'file'");
    std::filesystem::path p(file);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    file = p.string();
    return Tabulated::load(p);
  }
  bad("spectral_density.type must be 'semicircle' or 'tabulated'");
}

DrivingField parse_drive(const json& j) {
  check_keys(j, "drive", {"mean", "period", "shape", "amplitude", "coefficients"});
  DrivingField d;
  read(j, "mean", d.mean, "drive");
  read(j, "period", d.period, "drive");
  std::string shape = "sine";
  read(j, "shape", shape, "drive");
  double amplitude = 0.0;
  read(j, "amplitude", amplitude, "drive");
  if (shape == "sine") {
    d.shape = Sine{amplitude};
  } else if (shape == "square") {
    d.shape = Square{amplitude};
  } else if (shape == "harmonics") {
    if (j.contains("amplitude")) bad("harmonic drives take 'coefficients', not 'amplitude'");
    Harmonics h;
    if (j.contains("coefficients")) {
      const auto& c = j.at("coefficients");
      if (!c.is_array()) bad("drive.coefficients must be a list of [A_n, B_n] pairs");
      for (const auto& pair : c) {
        if (!pair.is_array() || pair.size() != 2) bad("drive.coefficients entries must be [A_n, B_n]");
        h.terms.push_back({number(pair[0], "drive.coefficients"), number(pair[1], "drive.coefficients")});
      }
    }
    d.shape = h;
  } else {
    bad("drive.shape must be 'sine', 'square' or 'harmonics'");
  }
  if (shape != "harmonics" && j.contains("coefficients")) bad("'coefficients' needs shape 'harmonics'");
  return d;
}

std::vector<SweepAxis> parse_axes(const json& j) {
  if (!j.is_array()) bad("sweep.axes must be a list");
  std::vector<SweepAxis> out;
  for (const auto& a : j) {
    check_keys(a, "sweep.axes[]", {"param", "values", "range"});
    std::string name;
    read(a, "param", name, "sweep.axes[]");
    SweepAxis ax{parse_sweep_param(name), {}};
    if (a.contains("values") == a.contains("range")) bad("a sweep axis takes exactly one of 'values' or 'range'");
    if (a.contains("values")) {
      if (!a.at("values").is_array()) bad("sweep axis 'values' must be a list");
      for (const auto& v : a.at("values")) ax.values.push_back(number(v, "sweep.axes[].values"));
    } else {
      const auto& r = a.at("range");
      if (!r.is_array() || r.size() != 3 || !r[2].is_number_integer()) {
        bad("sweep axis 'range' must be [first, last, count]");
      }
      const double lo = number(r[0], "range"), hi = number(r[1], "range");
      const auto n = r[2].get<long long>();
      if (n < 1) bad("sweep axis 'range' count must be >= 1");
      for (long long i = 0; i < n; ++i) {
        ax.values.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
      }
    }
    out.push_back(std::move(ax));
  }
  return out;
}

}  // namespace

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "", {"spectral_density", "system", "drive", "grid", "kernel", "comb", "oracle",
                     "metric", "convergence", "output", "sweep"});
  RunConfig c;
  auto& sc = c.scenario;
  sc.drive = DrivingField::constant(0.0);
  if (j.contains("spectral_density")) {
    sc.density = parse_density(j.at("spectral_density"), base_dir, c.tabulated_file);
  }
  if (j.contains("system")) {
    check_keys(j.at("system"), "system", {"eps_s"});
    read(j.at("system"), "eps_s", sc.eps_s, "system");
  }
  if (j.contains("drive")) sc.drive = parse_drive(j.at("drive"));
  if (j.contains("grid")) {
    check_keys(j.at("grid"), "grid", {"t_max", "h"});
    read(j.at("grid"), "t_max", sc.t_max, "grid");
    read(j.at("grid"), "h", sc.h, "grid");
  }
  if (j.contains("kernel")) {
    std::string k;
    read(j, "kernel", k, "");
    if (k == "analytic") {
      sc.kernel = KernelKind::Analytic;
    } else if (k == "quadrature") {
      sc.kernel = KernelKind::Quadrature;
    } else {
      bad("kernel must be 'analytic' or 'quadrature'");
    }
  }
  if (j.contains("comb")) {
    const auto& cj = j.at("comb");
    check_keys(cj, "comb", {"n_max", "strong_threshold"});
    if (cj.contains("n_max")) {
      if (!cj.at("n_max").is_number_integer()) bad("comb.n_max must be an integer");
      c.comb.n_max = cj.at("n_max").get<int>();
    }
    if (cj.contains("strong_threshold") && !cj.at("strong_threshold").is_null()) {
      c.comb.strong_threshold = number(cj.at("strong_threshold"), "comb.strong_threshold");
    }
  }
  if (j.contains("oracle")) {
    check_keys(j.at("oracle"), "oracle", {"n_modes", "substeps"});
    read(j.at("oracle"), "n_modes", c.oracle_modes, "oracle");
    read(j.at("oracle"), "substeps", c.oracle_substeps, "oracle");
  }
  if (j.contains("metric")) {
    check_keys(j.at("metric"), "metric", {"window"});
    if (j.at("metric").contains("window")) {
      const auto& w = j.at("metric").at("window");
      if (!w.is_array() || w.size() != 2) bad("metric.window must be [start, end]");
      c.window = {number(w[0], "metric.window"), number(w[1], "metric.window")};
    }
  }
  if (j.contains("convergence")) {
    check_keys(j.at("convergence"), "convergence", {"enabled", "tolerance"});
    read(j.at("convergence"), "enabled", c.convergence, "convergence");
    read(j.at("convergence"), "tolerance", c.convergence_tol, "convergence");
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    check_keys(o, "output", {"prefix", "svg", "u0_overlay", "stride"});
    read(o, "prefix", c.prefix, "output");
    read(o, "svg", c.svg, "output");
    read(o, "u0_overlay", c.u0_overlay, "output");
    read(o, "stride", c.stride, "output");
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    check_keys(s, "sweep", {"axes", "output", "threads"});
    if (s.contains("axes")) c.sweep_axes = parse_axes(s.at("axes"));
    read(s, "output", c.sweep_output, "sweep");
    read(s, "threads", c.threads, "sweep");
  }

  sc.validate();
  if (c.comb.n_max < 1) bad("comb.n_max must be >= 1");
  if (c.oracle_modes < 2) bad("oracle.n_modes must be >= 2");
  if (c.oracle_substeps < 1) bad("oracle.substeps must be >= 1");
  if (c.stride < 1) bad("output.stride must be >= 1");
  if (!(c.convergence_tol > 0.0)) bad("convergence.tolerance must be positive");
  if (!(c.window.hi > c.window.lo)) bad("metric.window must have start < end");
  return c;
}

json to_json(const RunConfig& c) {
  const auto& sc = c.scenario;
  json j;
  if (const auto* s = std::get_if<Semicircle>(&sc.density)) {
    j["spectral_density"] = {{"type", "semicircle"}, {"eta", s->eta}, {"eps0", s->eps0}, {"v0", s->v0}};
  } else {
    j["spectral_density"] = {{"type", "tabulated"}, {"file", c.tabulated_file}};
  }
  j["system"] = {{"eps_s", sc.eps_s}};
  json d{{"mean", sc.drive.mean}, {"period", sc.drive.period}};
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Sine>) {
          d["shape"] = "sine";
          d["amplitude"] = s.amplitude;
        } else if constexpr (std::is_same_v<S, Square>) {
          d["shape"] = "square";
          d["amplitude"] = s.amplitude;
        } else {
          d["shape"] = "harmonics";
          d["coefficients"] = json::array();
          for (const auto& t : s.terms) d["coefficients"].push_back({t.a, t.b});
        }
      },
      sc.drive.shape);
  j["drive"] = d;
  j["grid"] = {{"t_max", sc.t_max}, {"h", sc.h}};
  j["kernel"] = sc.kernel == KernelKind::Analytic ? "analytic" : "quadrature";
  j["comb"] = {{"n_max", c.comb.n_max},
               {"strong_threshold", c.comb.strong_threshold ? json(*c.comb.strong_threshold) : json(nullptr)}};
  j["oracle"] = {{"n_modes", c.oracle_modes}, {"substeps", c.oracle_substeps}};
  j["metric"] = {{"window", {c.window.lo, c.window.hi}}};
  j["convergence"] = {{"enabled", c.convergence}, {"tolerance", c.convergence_tol}};
  j["output"] = {{"prefix", c.prefix}, {"svg", c.svg}, {"u0_overlay", c.u0_overlay}, {"stride", c.stride}};
  json axes = json::array();
  for (const auto& a : c.sweep_axes) axes.push_back({{"param", to_string(a.param)}, {"values", a.values}});
  j["sweep"] = {{"axes", axes}, {"output", c.sweep_output}, {"threads", c.threads}};
  return j;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) bad("override '" + assignment + "' is not key.path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) bad("override '" + assignment + "' has an empty key");
    if (!node->is_object()) {
      if (!node->is_null()) bad("override '" + assignment + "' descends into a non-object");
      *node = json::object();
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  json j = json::object();
  std::filesystem::path base;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) bad("cannot open config " + path.string());
    try {
      j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      bad("config " + path.string() + ": " + e.what());
    }
    base = path.parent_path();
  }
  for (const auto& o : overrides) apply_override(j, o);
  return parse_config(j, base);
}

SweepSpec make_sweep_spec(const RunConfig& c) {
  SweepSpec s;
  s.base = c.scenario;
  s.axes = c.sweep_axes;
  s.window = c.window;
  s.output = c.sweep_output;
  s.comb = c.comb;
  s.convergence = c.convergence;
  s.convergence_tol = c.convergence_tol;
  s.threads = c.threads;
  return s;
}

}  // namespace ddecoh::cli
