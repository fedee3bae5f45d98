#include "quadrature.hpp"

#include <variant>

namespace ddecoh {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::QuadratureFailure: return "quadrature_failure";
    case ErrorKind::TooCloseToBandEdge: return "too_close_to_band_edge";
    case ErrorKind::StepTooLarge: return "step_too_large";
    case ErrorKind::KernelCoverage: return "kernel_coverage";
    case ErrorKind::WindowOutOfRange: return "window_out_of_range";
    case ErrorKind::GridMismatch: return "grid_mismatch";
  }
  return "unknown";
}

namespace detail {

std::vector<Interval> smooth_pieces(const SpectralDensity& sd) {
  if (const auto* tab = std::get_if<Tabulated>(&sd)) {
    std::vector<Interval> cells;
    const auto& x = tab->grid();
    const auto& y = tab->values();
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
      if (y[i] > 0.0 || y[i + 1] > 0.0) cells.push_back({x[i], x[i + 1]});
    }
    return cells;
  }
  return band(sd);
}

}  // namespace detail
}  // namespace ddecoh
