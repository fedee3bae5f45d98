#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <utility>

namespace ddecoh::detail {

namespace gl {
inline constexpr unsigned kOrder = 10;
using Rule = boost::math::quadrature::gauss<double, kOrder>;

/// Nodes/weights of the 10-point rule on [a, b].
template <class Visit>
void for_each_node(double a, double b, Visit&& visit) {
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double c = 0.5 * (a + b);
  const double r = 0.5 * (b - a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      visit(c, r * w[i]);
    } else {
      visit(c - r * x[i], r * w[i]);
      visit(c + r * x[i], r * w[i]);
    }
  }
}

template <class F>
double panel(F&& f, double a, double b) {
  double s = 0.0;
  for_each_node(a, b, [&](double x, double w) { s += w * f(x); });
  return s;
}
}  // namespace gl

template <class F>
void append_band_nodes(BandNodes& out, F&& f, Interval iv, double t_span,
                       double tol) {
  const double c = 0.5 * (iv.lo + iv.hi);
  const double r = 0.5 * (iv.hi - iv.lo);
  if (r <= 0.0) return;
  auto g = [&](double theta) {
    return f(c + r * std::cos(theta)) * (r * std::sin(theta));
  };
  // |d e / d theta| <= r, so a panel of width w in theta spans phase <= r w t.
  const auto n_base = static_cast<std::size_t>(
      std::max(8.0, std::ceil(4.0 * r * std::abs(t_span))));
  const double w0 = kPi / static_cast<double>(n_base);

  struct Panel {
    double a, b, whole;
    int depth;
  };
  std::vector<Panel> stack;
  for (std::size_t k = n_base; k-- > 0;) {
    const double a = w0 * static_cast<double>(k);
    const double b = (k + 1 == n_base) ? kPi : a + w0;
    stack.push_back({a, b, gl::panel(g, a, b), 0});
  }
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const double m = 0.5 * (p.a + p.b);
    const double left = gl::panel(g, p.a, m);
    const double right = gl::panel(g, m, p.b);
    if (std::abs(left + right - p.whole) <= tol * (p.b - p.a) / kPi) {
      gl::for_each_node(p.a, m, [&](double th, double w) {
        out.energy.push_back(c + r * std::cos(th));
        out.weight.push_back(w * g(th));
      });
      gl::for_each_node(m, p.b, [&](double th, double w) {
        out.energy.push_back(c + r * std::cos(th));
        out.weight.push_back(w * g(th));
      });
      continue;
    }
    if (p.depth >= 40) {
      throw Error(ErrorKind::QuadratureFailure,
                  "band quadrature could not resolve the spectral function");
    }
    stack.push_back({m, p.b, right, p.depth + 1});
    stack.push_back({p.a, m, left, p.depth + 1});
  }
}

}  // namespace ddecoh::detail
