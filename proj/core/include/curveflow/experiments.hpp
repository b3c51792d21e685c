#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/schemes.hpp"

namespace curveflow {

/// Exact expanding circle centered at the origin: radius (1+2t)^{1/4},
/// spatially constant curvature -(1+2t)^{-1/4}. The benchmark solution used
/// by the convergence ladder.
struct ExactExpandingCircle {
  double radius(double t) const;
  double curvature(double t) const;
};

/// Nodewise maximum deviations from the exact circle at one time level.
struct ErrorSample {
  double t = 0.0;
  double position = 0.0;       // max_j | |X_j| - r(t) |
  double curvature = 0.0;      // max_j | curv_j - exact |
  double bgn_curvature = 0.0;  // same for the position-identity curvature
};

ErrorSample circle_error_sample(const ClosedCurve& curve, const NodalField& curvature,
                                const NodalField& bgn_curvature,
                                const ExactExpandingCircle& exact, double t);

struct TimeSeriesRow {
  int m = 0;
  double t = 0.0;
  double energy_linear = 0.0;  // two-level energy (previous-mesh curvature weight)
  double energy_bar = 0.0;     // single-level energy
  double length = 0.0;
  double mesh_ratio = 0.0;
  double dissipation = 0.0;
  double stability_residual = 0.0;
  int picard_iters = 0;
  double multiplier = 0.0;
  double rel_length_change = 0.0;
};

struct RunRecord {
  std::string seed_name;
  Variant variant = Variant::linear;
  std::vector<TimeSeriesRow> rows;
  std::vector<std::pair<double, ClosedCurve>> snapshots;
  std::vector<ErrorSample> circle_errors;  // filled for expanding-circle runs
  double initial_energy = 0.0;             // variant energy at step 0
  double max_stability_residual = 0.0;
  double max_mesh_ratio = 0.0;
  int max_picard_iters = 0;
  double max_abs_rel_length_change = 0.0;
  AssumptionReport initial_assumptions;
  AssumptionReport final_assumptions;
  SchemeState final_state;
};

struct SimulationInput {
  InitialData initial;
  SchemeConfig config;
  double duration = 0.0;
  std::vector<double> snapshot_times;
  const ExactExpandingCircle* exact = nullptr;  // track circle errors when set
  std::string seed_name;
};

RunRecord simulate(const SimulationInput& input);

/// Max-in-time reduction of the tracked circle errors.
struct ErrorNorms {
  double position = 0.0;
  double curvature = 0.0;
  double bgn_curvature = 0.0;
};
ErrorNorms error_norms(const RunRecord& run, const ExactExpandingCircle& exact);

struct ConvergenceRow {
  int J = 0;
  double h = 0.0;
  double dt = 0.0;
  double err_position = 0.0;
  double err_curvature = 0.0;
  double err_bgn = 0.0;
  // log2 of the error ratio against the previous row; NaN on the first row.
  double eoc_position = 0.0;
  double eoc_curvature = 0.0;
  double eoc_bgn = 0.0;
};

/// The benchmark refinement ladder (J, dt) = (32*2^k, 0.04/4^k), k < levels.
std::vector<std::pair<int, double>> benchmark_ladder(int levels);

/// Expanding-circle convergence study over the given (J, dt) levels, run to
/// T = 1 with lambda = 0.
std::vector<ConvergenceRow> convergence_study(Variant variant,
                                              std::span<const std::pair<int, double>> levels);

/// Reference error levels for the expanding-circle benchmark ladder
/// (position, evolved curvature, position-identity curvature per level).
struct ReferenceErrors {
  std::vector<double> position;
  std::vector<double> curvature;
  std::vector<double> bgn_curvature;
};
const ReferenceErrors& reference_errors(Variant variant);

/// A canonical experiment: seed, scheme, and discretization defaults.
struct ExperimentSpec {
  std::string name;
  std::string seed;
  Variant variant = Variant::linear;
  int J = 32;
  double dt = 1e-3;
  double duration = 1.0;
  double lambda = 0.0;
  std::vector<double> snapshot_times;
  bool track_circle_errors = false;
};

const std::vector<ExperimentSpec>& experiment_presets();
ExperimentSpec preset(const std::string& name);

struct RunOverrides {
  std::optional<std::string> seed;
  std::optional<Variant> variant;
  std::optional<int> J;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<double> lambda;
  std::optional<double> picard_tol;
  std::optional<int> picard_max;
  std::optional<std::vector<double>> snapshot_times;
};

ExperimentSpec apply_overrides(ExperimentSpec spec, const RunOverrides& overrides);

/// Run a named experiment with the preset settings, optionally overridden.
RunRecord run_experiment(const std::string& name, const RunOverrides& overrides = {});
RunRecord run_experiment(const ExperimentSpec& spec);

}  // namespace curveflow
