#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segqa/attack.hpp"

namespace segqa {

struct MaeResult {
  double mean = 0.0;
  double std = 0.0;  // population std of the absolute errors
};

/// Mean absolute error between predictions and truths.
MaeResult mae(const std::vector<float>& predictions, const std::vector<float>& truths);
MaeResult mae(const std::vector<QualityScore>& predictions, const std::vector<QualityScore>& truths);

struct ReportRow {
  std::string method;  // baseline | proposed
  AttackSurface surface = AttackSurface::input_image;
  float epsilon = 0.0f;
  double mae_mean = 0.0;
  double mae_std = 0.0;
  int n = 0;  // SN, slice count
};

struct ReportProvenance {
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> checkpoint_hashes;  // label -> sha256
  uint64_t seed = 0;
};

/// MAE increase across the epsilon range, per attacked pipeline.
struct RobustnessDelta {
  std::string method;
  AttackSurface surface = AttackSurface::input_image;
  float epsilon_lo = 0.0f;
  float epsilon_hi = 0.0f;
  double delta = 0.0;
};

struct RobustnessReport {
  std::vector<ReportRow> rows;  // sorted by (method, surface, epsilon)
  std::vector<RobustnessDelta> deltas;
  std::optional<bool> proposed_more_robust;  // set when both methods are present
  ReportProvenance provenance;
  std::string std_convention = "population std of absolute errors per slice";
};

/// Aggregates sweep tables (one per attacked pipeline) into the per-epsilon
/// MAE table. All tables must cover the same test samples.
RobustnessReport build_report(const std::vector<std::vector<SweepRow>>& sweep_tables,
                              ReportProvenance provenance = {});

/// Canonical JSON rendering (stable key order, deterministic bytes).
std::string report_to_json(const RobustnessReport& report);

/// Writes report.json, report.csv and report.md under dir.
void write_report(const RobustnessReport& report, const std::filesystem::path& dir);

/// Writes per-surface MAE-vs-epsilon curve data (CSV) and a rendered line
/// plot (PNG) under dir.
void emit_plot_data(const RobustnessReport& report, const std::filesystem::path& dir);

}  // namespace segqa
