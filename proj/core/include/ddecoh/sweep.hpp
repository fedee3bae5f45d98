#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddecoh/scenario.hpp"

namespace ddecoh {

enum class SweepParam { Amplitude, Period, MeanDrive, Eta };

const char* to_string(SweepParam p) noexcept;
SweepParam parse_sweep_param(const std::string& name);  ///< "A", "T", "eps_d", "eta"

struct SweepAxis {
  SweepParam param = SweepParam::Period;
  std::vector<double> values;
};

struct SweepSpec {
  Scenario base;
  std::vector<SweepAxis> axes;  ///< one or two; the last axis varies fastest
  Interval window{150.0, 200.0};
  std::filesystem::path output;
  CombOptions comb;
  bool convergence = true;
  double convergence_tol = 1e-2;
  unsigned threads = 0;  ///< 0: hardware concurrency

  void validate() const;  ///< throws Error(Config)
  std::size_t n_points() const;
};

/// Scenario for point `index` in row-major axis order.
Scenario sweep_point(const SweepSpec& spec, std::size_t index);

/// Axis values for point `index`.
std::vector<double> sweep_coordinates(const SweepSpec& spec, std::size_t index);

/// Stable 64-bit hex digest of everything that determines the table.
std::string spec_fingerprint(const SweepSpec& spec);

struct SweepRow {
  std::vector<double> axis_values;
  std::string prediction;  ///< "survives", "dissipates" or "" on error
  std::optional<int> min_order;
  double metric = 0.0;
  double error_estimate = 0.0;
  std::string status;  ///< "ok" or "error:<kind>"
};

struct SweepControl {
  /// Stop after this many new rows have been written (simulated interrupt).
  std::optional<std::size_t> stop_after;
};

struct SweepResult {
  std::size_t resumed_rows = 0;  ///< rows found complete on disk
  std::size_t written_rows = 0;
  bool complete = false;
};

/// Evaluates every point and appends rows to spec.output in spec order. An
/// existing table whose sidecar (`<output>.json`) carries the same
/// fingerprint is resumed after its last complete row; a mismatching one is
/// an Error(Config).
SweepResult run_sweep(const SweepSpec& spec, const SweepControl& control = {});

/// Computes one row without touching the filesystem.
SweepRow evaluate_point(const SweepSpec& spec, std::size_t index);

std::string csv_header(const SweepSpec& spec);
std::string csv_row(const SweepRow& row);

}  // namespace ddecoh
