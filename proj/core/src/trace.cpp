#include "ddecoh/trace.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ddecoh/error.hpp"

namespace ddecoh {

TimeGrid TimeGrid::span(double t0, double t_max, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::Config, "time step must be positive and finite");
  }
  if (!(t_max >= t0)) throw Error(ErrorKind::Config, "t_max must not precede t0");
  const double n = std::round((t_max - t0) / h);
  return {t0, h, static_cast<std::size_t>(n)};
}

std::size_t PropagatorTrace::index_at(double t) const {
  const double k = std::round((t - grid.t0) / grid.h);
  if (k <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(k), grid.n_steps);
}

PropagatorTrace PropagatorTrace::decimate(std::size_t stride) const {
  if (stride == 0) throw Error(ErrorKind::Config, "decimation stride must be >= 1");
  PropagatorTrace out;
  out.grid = {grid.t0, grid.h * static_cast<double>(stride), grid.n_steps / stride};
  out.values.reserve(out.grid.size());
  for (std::size_t k = 0; k < out.grid.size(); ++k) out.values.push_back(values[k * stride]);
  return out;
}

void write_trace_csv(std::ostream& os, const PropagatorTrace& trace,
                     const std::string& metadata_json) {
  if (!metadata_json.empty()) {
    std::string one_line = metadata_json;
    std::replace(one_line.begin(), one_line.end(), '\n', ' ');
    fmt::print(os, "# {}\n", one_line);
  }
  fmt::print(os, "t,re_u,im_u,abs_u\n");
  for (std::size_t k = 0; k < trace.values.size(); ++k) {
    const cplx u = trace.values[k];
    fmt::print(os, "{},{},{},{}\n", trace.time(k), u.real(), u.imag(), std::abs(u));
  }
}

PropagatorTrace read_trace_csv(std::istream& is, std::string* metadata_json) {
  PropagatorTrace out;
  std::vector<double> times;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      if (metadata_json) *metadata_json = line.substr(2);
      continue;
    }
    if (line.rfind("t,", 0) == 0) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t = 0.0, re = 0.0, im = 0.0;
    if (!(row >> t >> re >> im)) {
      throw Error(ErrorKind::Config, "malformed trace row: " + line);
    }
    times.push_back(t);
    out.values.emplace_back(re, im);
  }
  if (times.empty()) throw Error(ErrorKind::Config, "trace file has no rows");
  out.grid.t0 = times.front();
  out.grid.n_steps = times.size() - 1;
  out.grid.h = times.size() > 1 ? (times.back() - times.front()) /
                                      static_cast<double>(times.size() - 1)
                                : 1.0;
  return out;
}

void write_abs_svg(std::ostream& os, const std::vector<SvgCurve>& curves,
                   const std::string& title) {
  constexpr double W = 720, H = 360, L = 60, R = 20, T = 40, B = 50;
  double t_lo = 0.0, t_hi = 1.0, y_hi = 1.0;
  bool first = true;
  for (const auto& c : curves) {
    if (!c.trace || c.trace->values.empty()) continue;
    const double a = c.trace->time(0);
    const double b = c.trace->time(c.trace->values.size() - 1);
    t_lo = first ? a : std::min(t_lo, a);
    t_hi = first ? b : std::max(t_hi, b);
    for (const auto& u : c.trace->values) y_hi = std::max(y_hi, std::abs(u));
    first = false;
  }
  if (t_hi <= t_lo) t_hi = t_lo + 1.0;
  auto px = [&](double t) { return L + (t - t_lo) / (t_hi - t_lo) * (W - L - R); };
  auto py = [&](double y) { return T + (1.0 - y / y_hi) * (H - T - B); };

  fmt::print(os,
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
             "font-family=\"sans-serif\" font-size=\"12\">\n",
             W, H);
  fmt::print(os, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
  fmt::print(os, "<text x=\"{}\" y=\"20\" text-anchor=\"middle\">{}</text>\n", W / 2, title);
  fmt::print(os,
             "<polyline points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"black\"/>\n",
             L, T, L, H - B, W - R, H - B);
  for (int i = 0; i <= 5; ++i) {
    const double t = t_lo + (t_hi - t_lo) * i / 5.0;
    const double y = y_hi * i / 5.0;
    fmt::print(os, "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{:.4g}</text>\n",
               px(t), H - B + 16, t);
    fmt::print(os, "<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{:.2f}</text>\n",
               L - 6, py(y) + 4, y);
  }
  fmt::print(os, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t</text>\n",
             (L + W - R) / 2, H - 12);
  fmt::print(os,
             "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" "
             "transform=\"rotate(-90 16 {})\">|u(t)|</text>\n",
             (T + H - B) / 2, (T + H - B) / 2);

  int legend = 0;
  for (const auto& c : curves) {
    if (!c.trace || c.trace->values.empty()) continue;
    // At most ~4000 vertices per curve.
    const std::size_t n = c.trace->values.size();
    const std::size_t stride = std::max<std::size_t>(1, n / 4000);
    fmt::print(os, "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\"{} points=\"",
               c.color, c.dashed ? " stroke-dasharray=\"6 3\"" : "");
    for (std::size_t k = 0; k < n; k += stride) {
      fmt::print(os, "{:.2f},{:.2f} ", px(c.trace->time(k)), py(std::abs(c.trace->values[k])));
    }
    fmt::print(os, "\"/>\n");
    fmt::print(os, "<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", W - R - 150,
               T + 16 + 16 * legend, c.color, c.label);
    ++legend;
  }
  fmt::print(os, "</svg>\n");
}

}  // namespace ddecoh
