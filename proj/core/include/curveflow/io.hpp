#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "curveflow/experiments.hpp"

namespace curveflow {

/// Everything a `run` invocation needs. Defaults come from an experiment
/// preset when `experiment` is set; explicit keys win over the preset.
struct RunConfig {
  std::string experiment;  // preset name, may be empty for fully custom runs
  std::string seed = "circle";
  std::string vertices_file;  // CSV polygon for seed = "vertices"
  Variant variant = Variant::linear;
  int J = 32;
  double dt = 1e-3;
  double duration = 1.0;
  double lambda = 0.0;
  double picard_tol = 1e-10;
  int picard_max = 100;
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir = "out";
  bool emit_svg = false;

  void validate() const;  // throws ConfigError
};

/// Parse a flat key = value config file ('#' comments, blank lines ignored).
RunConfig parse_run_config(const std::filesystem::path& file);

/// Apply one "key=value" override on top of a parsed config.
void apply_override(RunConfig& config, const std::string& key_equals_value);

/// Full-precision decimal formatting (17 significant digits): reading the
/// value back reproduces the double exactly.
std::string format_full(double value);

ClosedCurve read_vertex_csv(const std::filesystem::path& file);
void write_timeseries_csv(const std::filesystem::path& file, const RunRecord& record);
void write_snapshot_csv(const std::filesystem::path& file, const ClosedCurve& curve);
void write_convergence_csv(const std::filesystem::path& file,
                           const std::vector<ConvergenceRow>& rows, const std::string& verdict);
void write_energy_svg(const std::filesystem::path& file, const RunRecord& record);
void write_curves_svg(const std::filesystem::path& file, const RunRecord& record);

/// Execute a run and write timeseries.csv, snapshots/curve_<t>.csv,
/// summary.json and the optional SVG plots into the output directory.
/// Returns the process exit status (0 on success); failures leave a
/// machine-readable error object in summary.json.
int cmd_run(RunConfig config);

struct ConvergeOptions {
  Variant scheme = Variant::linear;
  int levels = 5;
  std::filesystem::path output_dir = "converge_out";
};

/// Run the expanding-circle benchmark ladder and write convergence.csv plus a
/// verdict against the reference error levels. Returns 0 when the verdict is
/// "pass" or "insufficient levels", 2 when it is "fail".
int cmd_converge(const ConvergeOptions& options);

/// Resolve the output directory against the CURVEFLOW_OUTPUT_ROOT environment
/// variable (relative paths are placed under the root when it is set).
std::filesystem::path resolve_output_dir(const std::filesystem::path& dir);

}  // namespace curveflow
