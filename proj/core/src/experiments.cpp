#include "curveflow/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace curveflow {

double ExactExpandingCircle::radius(double t) const { return std::pow(1.0 + 2.0 * t, 0.25); }

double ExactExpandingCircle::curvature(double t) const {
  return -std::pow(1.0 + 2.0 * t, -0.25);
}

ErrorSample circle_error_sample(const ClosedCurve& curve, const NodalField& curvature,
                                const NodalField& bgn_curvature,
                                const ExactExpandingCircle& exact, double t) {
  const double r = exact.radius(t);
  const double k = exact.curvature(t);
  ErrorSample sample;
  sample.t = t;
  for (int j = 0; j < curve.size(); ++j) {
    sample.position = std::max(sample.position, std::abs(curve[j].norm() - r));
    sample.curvature = std::max(sample.curvature, std::abs(curvature[j] - k));
    sample.bgn_curvature = std::max(sample.bgn_curvature, std::abs(bgn_curvature[j] - k));
  }
  return sample;
}

namespace {

TimeSeriesRow diagnostics_row(const SchemeState& state, double lambda, int m, double t) {
  const CurveFrame cur = frame(state.current);
  const CurveFrame prev = frame(state.previous);
  const EnergyReport energy = energies(state.curvature, prev.weight, cur.weight, lambda);
  TimeSeriesRow row;
  row.m = m;
  row.t = t;
  row.energy_linear = energy.linear_energy;
  row.energy_bar = energy.bar_energy;
  row.length = energy.length;
  row.mesh_ratio = mesh_ratio(state.current);
  return row;
}

// Row for level m+1, built from the step result before the state advances.
TimeSeriesRow diagnostics_row_from(const StepResult& result, const SchemeState& pre_state,
                                   double lambda, int m, double t) {
  const CurveFrame pre = frame(pre_state.current);
  const CurveFrame post = frame(result.positions);
  const EnergyReport energy = energies(result.curvature, pre.weight, post.weight, lambda);
  TimeSeriesRow row;
  row.m = m;
  row.t = t;
  row.energy_linear = energy.linear_energy;
  row.energy_bar = energy.bar_energy;
  row.length = energy.length;
  row.mesh_ratio = mesh_ratio(result.positions);
  row.dissipation = result.diag.dissipation;
  row.stability_residual = result.diag.stability_residual;
  row.picard_iters = result.diag.picard_iters;
  row.multiplier = result.diag.multiplier;
  row.rel_length_change = result.diag.rel_length_change;
  return row;
}

}  // namespace

RunRecord simulate(const SimulationInput& input) {
  const SchemeConfig& cfg = input.config;
  if (!(cfg.dt > 0.0)) throw ConfigError("simulate: dt must be positive");
  if (input.duration < cfg.dt) {
    throw ConfigError("simulate: duration must cover at least one step");
  }
  const int steps = static_cast<int>(std::llround(input.duration / cfg.dt));

  RunRecord record;
  record.seed_name = input.seed_name;
  record.variant = cfg.variant;

  // Map requested snapshot times to step indices (presets use multiples of dt).
  std::set<int> snapshot_steps;
  for (const double t : input.snapshot_times) {
    const int idx = static_cast<int>(std::llround(t / cfg.dt));
    if (idx >= 0 && idx <= steps) snapshot_steps.insert(idx);
  }

  SchemeState state = initial_state(input.initial);

  TimeSeriesRow row0 = diagnostics_row(state, cfg.lambda, 0, 0.0);
  record.rows.reserve(static_cast<size_t>(steps) + 1);
  record.rows.push_back(row0);
  record.max_mesh_ratio = row0.mesh_ratio;
  switch (cfg.variant) {
    case Variant::nonlinear:
      record.initial_energy = row0.energy_bar;
      break;
    case Variant::length_preserving:
      // Pure bending reference energy: the multiplier replaces a fixed lambda.
      record.initial_energy = row0.energy_linear - cfg.lambda * row0.length;
      break;
    default:
      record.initial_energy = row0.energy_linear;
      break;
  }
  record.initial_assumptions = check_assumptions(state.current, cfg.lambda);
  if (snapshot_steps.count(0) > 0) record.snapshots.emplace_back(0.0, state.current);
  if (input.exact != nullptr) {
    record.circle_errors.push_back(
        circle_error_sample(state.current, state.curvature, state.bgn_curvature, *input.exact,
                            0.0));
  }

  SolverCache cache;
  for (int m = 0; m < steps; ++m) {
    StepResult result = step(state, cfg, &cache);
    const double t_next = (m + 1) * cfg.dt;

    TimeSeriesRow row = diagnostics_row_from(result, state, cfg.lambda, m + 1, t_next);
    record.rows.push_back(row);
    record.max_stability_residual =
        std::max(record.max_stability_residual, result.diag.stability_residual);
    record.max_mesh_ratio = std::max(record.max_mesh_ratio, row.mesh_ratio);
    record.max_picard_iters = std::max(record.max_picard_iters, result.diag.picard_iters);
    record.max_abs_rel_length_change =
        std::max(record.max_abs_rel_length_change, std::abs(result.diag.rel_length_change));

    advance(state, std::move(result), cfg.dt);

    if (snapshot_steps.count(m + 1) > 0) record.snapshots.emplace_back(t_next, state.current);
    if (input.exact != nullptr) {
      record.circle_errors.push_back(circle_error_sample(
          state.current, state.curvature, state.bgn_curvature, *input.exact, t_next));
    }
  }

  record.final_assumptions = check_assumptions(state.current, cfg.lambda);
  record.final_state = std::move(state);
  return record;
}

ErrorNorms error_norms(const RunRecord& run, const ExactExpandingCircle&) {
  if (run.circle_errors.empty()) {
    throw UsageError("error_norms: the run did not track expanding-circle errors");
  }
  ErrorNorms norms;
  for (const ErrorSample& sample : run.circle_errors) {
    norms.position = std::max(norms.position, sample.position);
    norms.curvature = std::max(norms.curvature, sample.curvature);
    norms.bgn_curvature = std::max(norms.bgn_curvature, sample.bgn_curvature);
  }
  return norms;
}

std::vector<std::pair<int, double>> benchmark_ladder(int levels) {
  std::vector<std::pair<int, double>> ladder;
  for (int k = 0; k < levels; ++k) {
    ladder.emplace_back(32 << k, 0.04 / std::pow(4.0, k));
  }
  return ladder;
}

std::vector<ConvergenceRow> convergence_study(Variant variant,
                                              std::span<const std::pair<int, double>> levels) {
  const ExactExpandingCircle exact;
  std::vector<ConvergenceRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& [J, dt] : levels) {
    SimulationInput input;
    input.initial = bgn_project(interpolate(make_parameterization("expanding_circle"), J));
    input.config.variant = variant;
    input.config.lambda = 0.0;
    input.config.dt = dt;
    input.duration = 1.0;
    input.exact = &exact;
    input.seed_name = "expanding_circle";
    const RunRecord record = simulate(input);
    const ErrorNorms norms = error_norms(record, exact);

    ConvergenceRow row;
    row.J = J;
    row.h = 1.0 / J;
    row.dt = dt;
    row.err_position = norms.position;
    row.err_curvature = norms.curvature;
    row.err_bgn = norms.bgn_curvature;
    row.eoc_position = row.eoc_curvature = row.eoc_bgn = nan;
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.eoc_position = std::log2(prev.err_position / row.err_position);
      row.eoc_curvature = std::log2(prev.err_curvature / row.err_curvature);
      row.eoc_bgn = std::log2(prev.err_bgn / row.err_bgn);
    }
    rows.push_back(row);
  }
  return rows;
}

const ReferenceErrors& reference_errors(Variant variant) {
  static const ReferenceErrors linear{
      {8.30e-3, 2.04e-3, 5.10e-4, 1.27e-4, 3.18e-5},
      {1.38e-2, 3.66e-3, 9.27e-4, 2.33e-4, 5.82e-5},
      {4.42e-2, 1.11e-2, 2.80e-3, 7.01e-4, 1.75e-4},
  };
  static const ReferenceErrors nonlinear{
      {4.38e-3, 1.09e-3, 2.73e-4, 6.82e-5, 1.71e-5},
      {4.92e-3, 1.22e-3, 3.07e-4, 7.67e-5, 1.92e-5},
      {4.41e-2, 1.10e-2, 2.80e-3, 7.01e-4, 1.75e-4},
  };
  switch (variant) {
    case Variant::linear: return linear;
    case Variant::nonlinear: return nonlinear;
    default:
      throw UsageError("reference_errors: benchmark levels exist only for the linear and "
                       "nonlinear schemes");
  }
}

const std::vector<ExperimentSpec>& experiment_presets() {
  static const std::vector<ExperimentSpec> presets = {
      {"example1", "expanding_circle", Variant::linear, 32, 0.04, 1.0, 0.0, {0.0, 1.0}, true},
      {"example1_nonlinear", "expanding_circle", Variant::nonlinear, 32, 0.04, 1.0, 0.0,
       {0.0, 1.0}, true},
      {"example2", "tube", Variant::linear, 128, 1e-3, 50.0, 0.0,
       {0.0, 1.0, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0}, false},
      {"example2_nonlinear", "tube", Variant::nonlinear, 128, 1e-3, 50.0, 0.0,
       {0.0, 1.0, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0}, false},
      {"example2_lambda05", "tube", Variant::linear, 256, 1e-4, 10.0, 0.5,
       {0.0, 0.2, 0.4, 1.0, 2.0, 3.0, 4.0, 10.0}, false},
      {"example2_lambda2", "tube", Variant::linear, 256, 1e-4, 10.0, 2.0,
       {0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 2.0, 10.0}, false},
      {"example3", "ellipse", Variant::linear, 256, 1e-3, 20.0, 0.0,
       {0.0, 0.2, 0.4, 1.0, 2.0, 5.0, 10.0, 20.0}, false},
      {"example3_uniform", "ellipse_uniform", Variant::linear, 256, 1e-3, 20.0, 0.0,
       {0.0, 0.2, 0.4, 1.0, 2.0, 5.0, 10.0, 20.0}, false},
      {"example4", "ellipse", Variant::linear, 256, 1e-3, 10.0, 0.5,
       {0.0, 0.2, 0.4, 1.0, 2.0, 3.0, 4.0, 10.0}, false},
      {"example4_alt", "ellipse", Variant::alt_linear, 256, 1e-3, 10.0, 0.5,
       {0.0, 0.2, 0.4, 1.0, 2.0, 3.0, 4.0, 10.0}, false},
      {"example5", "lemniscate", Variant::linear, 256, 1e-3, 10.0, 0.0,
       {0.0, 0.2, 0.4, 1.0, 2.0, 3.0, 5.0, 10.0}, false},
      {"example5_lambda04", "lemniscate", Variant::linear, 256, 1e-3, 10.0, 0.4,
       {0.0, 0.2, 0.4, 1.0, 2.0, 3.0, 5.0, 10.0}, false},
      {"example6", "lemniscate", Variant::length_preserving, 256, 1e-3, 1.0, 0.0,
       {0.0, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0}, false},
  };
  return presets;
}

ExperimentSpec preset(const std::string& name) {
  for (const ExperimentSpec& spec : experiment_presets()) {
    if (spec.name == name) return spec;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentSpec apply_overrides(ExperimentSpec spec, const RunOverrides& overrides) {
  if (overrides.seed) spec.seed = *overrides.seed;
  if (overrides.variant) spec.variant = *overrides.variant;
  if (overrides.J) spec.J = *overrides.J;
  if (overrides.dt) spec.dt = *overrides.dt;
  if (overrides.duration) spec.duration = *overrides.duration;
  if (overrides.lambda) spec.lambda = *overrides.lambda;
  if (overrides.snapshot_times) spec.snapshot_times = *overrides.snapshot_times;
  return spec;
}

RunRecord run_experiment(const ExperimentSpec& spec) {
  SimulationInput input;
  input.initial = bgn_project(interpolate(make_parameterization(spec.seed), spec.J));
  input.config.variant = spec.variant;
  input.config.lambda = spec.lambda;
  input.config.dt = spec.dt;
  input.duration = spec.duration;
  input.snapshot_times = spec.snapshot_times;
  input.seed_name = spec.seed;
  const ExactExpandingCircle exact;
  if (spec.track_circle_errors) input.exact = &exact;
  return simulate(input);
}

RunRecord run_experiment(const std::string& name, const RunOverrides& overrides) {
  ExperimentSpec spec = apply_overrides(preset(name), overrides);
  SimulationInput input;
  input.initial = bgn_project(interpolate(make_parameterization(spec.seed), spec.J));
  input.config.variant = spec.variant;
  input.config.lambda = spec.lambda;
  input.config.dt = spec.dt;
  if (overrides.picard_tol) input.config.picard_tol = *overrides.picard_tol;
  if (overrides.picard_max) input.config.picard_max = *overrides.picard_max;
  input.duration = spec.duration;
  input.snapshot_times = spec.snapshot_times;
  input.seed_name = spec.seed;
  const ExactExpandingCircle exact;
  if (spec.track_circle_errors) input.exact = &exact;
  return simulate(input);
}

}  // namespace curveflow
