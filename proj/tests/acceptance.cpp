// Acceptance suite: drives every headline requirement end to end and prints
// one pass/fail line per criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "curveflow/experiments.hpp"
#include "curveflow/io.hpp"
#include "oracles.hpp"

using namespace curveflow;

namespace {

int failures = 0;

void criterion(int number, const std::string& title,
               const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& err) {
    detail = std::string("exception: ") + err.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("[%s] criterion %d: %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", number, title.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * target;
}

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", v);
  return buffer;
}

double max_center_radius_deviation(const ClosedCurve& curve, double target) {
  const Vec2 center = centroid(curve);
  double deviation = 0.0;
  for (const Vec2& v : curve.vertices) {
    deviation = std::max(deviation, std::abs((v - center).norm() - target));
  }
  return deviation;
}

bool check_residuals(const RunRecord& run, std::string& detail) {
  if (run.max_stability_residual > 1e-10 * run.initial_energy) {
    detail += " stability residual " + fmt(run.max_stability_residual) + " exceeds 1e-10*E0=" +
              fmt(1e-10 * run.initial_energy) + ";";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
  const auto rows = convergence_study(Variant::linear, benchmark_ladder(5));
  const ReferenceErrors& ref = reference_errors(Variant::linear);
  bool ok = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!within(rows[i].err_position, ref.position[i], 0.03) ||
        !within(rows[i].err_curvature, ref.curvature[i], 0.03) ||
        !within(rows[i].err_bgn, ref.bgn_curvature[i], 0.03)) {
      ok = false;
      detail += " level " + std::to_string(i) + " errors (" + fmt(rows[i].err_position) + ", " +
                fmt(rows[i].err_curvature) + ", " + fmt(rows[i].err_bgn) + ") off reference;";
    }
    if (i >= 1) {
      for (const double eoc : {rows[i].eoc_position, rows[i].eoc_curvature, rows[i].eoc_bgn}) {
        if (!(eoc >= 1.9 && eoc <= 2.1)) {
          ok = false;
          detail += " level " + std::to_string(i) + " EOC " + fmt(eoc) + " outside [1.9,2.1];";
        }
      }
    }
  }
  if (ok) {
    detail = "5 levels, all errors within 3% (finest errX " + fmt(rows.back().err_position) +
             "), all EOCs in [1.9,2.1]";
  }
  return ok;
}

bool criterion2(std::string& detail) {
  const ReferenceErrors& ref = reference_errors(Variant::nonlinear);
  const ExactExpandingCircle exact;
  std::vector<double> errs;
  bool ok = true;
  int worst_picard = 0;
  for (const auto& [J, dt] : benchmark_ladder(5)) {
    SimulationInput input;
    input.initial = bgn_project(interpolate(make_parameterization("expanding_circle"), J));
    input.config.variant = Variant::nonlinear;
    input.config.dt = dt;
    input.config.picard_tol = 1e-10;
    input.duration = 1.0;
    input.exact = &exact;
    input.seed_name = "expanding_circle";
    const RunRecord run = simulate(input);
    ok = check_residuals(run, detail) && ok;
    errs.push_back(error_norms(run, exact).position);
    for (const TimeSeriesRow& row : run.rows) {
      if (row.m > 10) worst_picard = std::max(worst_picard, row.picard_iters);
    }
  }
  for (size_t i = 0; i < errs.size(); ++i) {
    if (!within(errs[i], ref.position[i], 0.03)) {
      ok = false;
      detail += " level " + std::to_string(i) + " errX " + fmt(errs[i]) + " vs " +
                fmt(ref.position[i]) + ";";
    }
    if (i >= 1) {
      const double eoc = std::log2(errs[i - 1] / errs[i]);
      if (!(eoc >= 1.9 && eoc <= 2.1)) {
        ok = false;
        detail += " level " + std::to_string(i) + " EOC " + fmt(eoc) + " outside window;";
      }
    }
  }
  if (worst_picard > 5) {
    ok = false;
    detail += " Picard needed " + std::to_string(worst_picard) + " iterations after step 10;";
  }
  if (ok) {
    detail = "errX within 3% at all 5 levels, EOC in window, Picard <= " +
             std::to_string(worst_picard) + " per step after step 10";
  }
  return ok;
}

bool criterion3(std::string& detail) {
  bool ok = true;
  double worst_relative = 0.0;
  for (const Variant variant : {Variant::linear, Variant::nonlinear, Variant::alt_linear,
                                Variant::length_preserving}) {
    for (const double dt : {1e-4, 1e-3, 0.04, 0.5, 1.0}) {
      for (const char* seed : {"ellipse", "lemniscate"}) {
        const int J = 48;
        SchemeState state = initial_state(bgn_project(interpolate(make_parameterization(seed), J)));
        SchemeConfig cfg;
        cfg.variant = variant;
        cfg.lambda = variant == Variant::length_preserving ? 0.0 : 0.5;
        cfg.dt = dt;
        const double initial_energy = [&] {
          const CurveFrame f = frame(state.current);
          const EnergyReport e = energies(state.curvature, f.weight, f.weight, cfg.lambda);
          return variant == Variant::nonlinear
                     ? e.bar_energy
                     : (variant == Variant::length_preserving ? e.linear_energy - cfg.lambda * e.length
                                                              : e.linear_energy);
        }();
        SolverCache cache;
        for (int m = 0; m < 25; ++m) {
          StepResult result = step(state, cfg, &cache);
          worst_relative =
              std::max(worst_relative, result.diag.stability_residual / initial_energy);
          if (result.diag.stability_residual > 1e-10 * initial_energy) {
            ok = false;
            detail += std::string(" ") + to_string(variant) + "/" + seed + " dt=" + fmt(dt) +
                      " step " + std::to_string(m) + " residual " +
                      fmt(result.diag.stability_residual) + ";";
          }
          advance(state, std::move(result), cfg.dt);
        }
      }
    }
  }
  if (ok) {
    detail = "all 4 variants x dt in {1e-4,1e-3,0.04,0.5,1} x 2 seeds x 25 steps; worst "
             "residual/E0 = " +
             fmt(worst_relative);
  }
  return ok;
}

bool criterion4(std::string& detail) {
  bool ok = true;
  {
    const RunRecord run = run_experiment("example2_lambda05");
    ok = check_residuals(run, detail) && ok;
    const double deviation = max_center_radius_deviation(run.final_state.current, 1.0);
    if (deviation > 0.02 * 1.0) {
      ok = false;
      detail += " lambda=0.5 deviation " + fmt(deviation) + " from radius 1;";
    } else {
      detail += " lambda=0.5 -> radius 1 within " + fmt(deviation) + ";";
    }
  }
  {
    const RunRecord run = run_experiment("example2_lambda2");
    ok = check_residuals(run, detail) && ok;
    const double deviation = max_center_radius_deviation(run.final_state.current, 0.5);
    if (deviation > 0.02 * 0.5) {
      ok = false;
      detail += " lambda=2 deviation " + fmt(deviation) + " from radius 0.5;";
    } else {
      detail += " lambda=2 -> radius 0.5 within " + fmt(deviation) + ";";
    }
  }
  return ok;
}

bool criterion5(std::string& detail) {
  bool ok = true;
  {
    const RunRecord run = run_experiment("example2");
    ok = check_residuals(run, detail) && ok;
    const double final_ratio = run.rows.back().mesh_ratio;
    if (run.max_mesh_ratio > 1.3 || final_ratio > 1.1) {
      ok = false;
      detail += " tube maxR " + fmt(run.max_mesh_ratio) + " finalR " + fmt(final_ratio) + ";";
    } else {
      detail += " tube maxR " + fmt(run.max_mesh_ratio) + ", R(50) " + fmt(final_ratio) + ";";
    }
  }
  {
    const RunRecord run = run_experiment("example3");
    ok = check_residuals(run, detail) && ok;
    const double final_ratio = run.rows.back().mesh_ratio;
    if (final_ratio > 1.1) {
      ok = false;
      detail += " ellipse R(20) " + fmt(final_ratio) + " above 1.1;";
    } else {
      detail += " ellipse R(20) " + fmt(final_ratio) + " from R(0) " +
                fmt(run.rows.front().mesh_ratio);
    }
  }
  return ok;
}

bool criterion6(std::string& detail) {
  const RunRecord run = run_experiment("example6");
  bool ok = check_residuals(run, detail);
  if (run.max_abs_rel_length_change > 1e-4) {
    ok = false;
    detail += " max|dL| " + fmt(run.max_abs_rel_length_change) + " above 1e-4;";
  }
  const double slack = 1e-10 * run.initial_energy;
  for (size_t i = 1; i < run.rows.size(); ++i) {
    if (run.rows[i].energy_linear > run.rows[i - 1].energy_linear + slack) {
      ok = false;
      detail += " bending energy rose at step " + std::to_string(i) + ";";
      break;
    }
  }
  if (ok) {
    detail = "max|dL| = " + fmt(run.max_abs_rel_length_change) +
             ", bending energy nonincreasing over " + std::to_string(run.rows.size() - 1) +
             " steps";
  }
  return ok;
}

bool criterion7(std::string& detail) {
  bool ok = true;
  double worst_entry = 0.0, worst_solve = 0.0;
  for (const int J : {4, 8, 12}) {
    SchemeState state;
    state.current = oracle::random_curve(J, 7000 + static_cast<unsigned>(J), 0.2, 0.15);
    state.previous = state.current;
    std::mt19937 rng(7100 + static_cast<unsigned>(J));
    std::uniform_real_distribution<double> dist(-0.04, 0.04);
    for (Vec2& v : state.previous.vertices) v += Vec2(dist(rng), dist(rng));
    state.curvature = oracle::random_field(J, 7200 + static_cast<unsigned>(J), -2.0, 2.0);
    state.bgn_curvature = oracle::random_field(J, 7300 + static_cast<unsigned>(J), -2.0, 2.0);

    for (const Variant variant : {Variant::linear, Variant::nonlinear, Variant::alt_linear,
                                  Variant::length_preserving}) {
      SchemeConfig cfg;
      cfg.variant = variant;
      cfg.lambda = variant == Variant::length_preserving ? 0.0 : 0.3;
      cfg.dt = 0.02;
      ClosedCurve frozen = state.current;
      for (Vec2& v : frozen.vertices) v += Vec2(dist(rng), dist(rng));
      const ClosedCurve* frozen_arg = variant == Variant::nonlinear ? &frozen : nullptr;

      const SparseSystem system = assemble(state, cfg, frozen_arg);
      const oracle::DenseSystem dense = oracle::dense_assemble(state, cfg, frozen_arg);
      const int n = system.dimension;

      std::vector<std::vector<double>> assembled(
          static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
      for (const Triplet& t : system.entries) {
        assembled[static_cast<size_t>(t.row)][static_cast<size_t>(t.col)] += t.value;
      }
      double scale = 1.0;
      for (const auto& row : dense.matrix) {
        for (const double v : row) scale = std::max(scale, std::abs(v));
      }
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          const double diff =
              std::abs(assembled[static_cast<size_t>(r)][static_cast<size_t>(c)] -
                       dense.matrix[static_cast<size_t>(r)][static_cast<size_t>(c)]);
          worst_entry = std::max(worst_entry, diff / scale);
          if (diff > 1e-13 * scale) ok = false;
        }
        const double rhs_diff =
            std::abs(system.rhs[static_cast<size_t>(r)] - dense.rhs[static_cast<size_t>(r)]);
        worst_entry = std::max(worst_entry, rhs_diff / scale);
        if (rhs_diff > 1e-13 * scale) ok = false;
      }

      // sparse direct solve against dense Gaussian elimination
      const std::vector<double> sparse_x =
          solve(CompressedMatrix(n, system.entries), system.rhs);
      const std::vector<double> dense_x = oracle::dense_solve(dense.matrix, dense.rhs);
      double x_scale = 1.0;
      for (const double v : dense_x) x_scale = std::max(x_scale, std::abs(v));
      for (int r = 0; r < n; ++r) {
        const double diff =
            std::abs(sparse_x[static_cast<size_t>(r)] - dense_x[static_cast<size_t>(r)]);
        worst_solve = std::max(worst_solve, diff / x_scale);
        if (diff > 1e-11 * x_scale) ok = false;
      }
    }
  }
  detail = "J in {4,8,12}, all variants: worst entry mismatch " + fmt(worst_entry) +
           " (tol 1e-13), worst solve mismatch " + fmt(worst_solve) + " (tol 1e-11)";
  return ok;
}

bool criterion8(std::string& detail) {
  bool ok = true;

  // sqrt_jacobian is identically one at step zero
  const InitialData circle_data = bgn_project(interpolate(make_parameterization("circle"), 24));
  const SchemeState fresh = initial_state(circle_data);
  const ElementField jac = sqrt_jacobian(fresh.current, fresh.previous);
  for (int e = 0; e < jac.size(); ++e) {
    if (jac[e] != 1.0) {
      ok = false;
      detail += " sqrt_jacobian != 1 at step 0;";
      break;
    }
  }

  // regular polygons stay regular under every stepper
  for (const Variant variant : {Variant::linear, Variant::nonlinear, Variant::alt_linear,
                                Variant::length_preserving}) {
    SchemeConfig cfg;
    cfg.variant = variant;
    cfg.lambda = variant == Variant::length_preserving ? 0.0 : 0.25;
    cfg.dt = 0.01;
    SchemeState state = initial_state(bgn_project(oracle::regular_polygon(24)));
    for (int m = 0; m < 3; ++m) {
      StepResult result = step(state, cfg);
      if (mesh_ratio(result.positions) > 1.0 + 1e-9) {
        ok = false;
        detail += std::string(" ") + to_string(variant) + " broke polygon symmetry;";
        break;
      }
      advance(state, std::move(result), cfg.dt);
    }
  }

  // translation/rotation equivariance of every stepper
  SchemeState base = initial_state(bgn_project(interpolate(make_parameterization("ellipse"), 16)));
  {
    SchemeConfig warm;
    warm.variant = Variant::linear;
    warm.lambda = 0.25;
    warm.dt = 0.005;
    advance(base, step(base, warm), warm.dt);
  }
  const Vec2 shift(4.0, -7.0);
  const double angle = 0.6;
  const double c = std::cos(angle), s = std::sin(angle);
  auto rotate = [&](const Vec2& v) { return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y()); };
  for (const Variant variant : {Variant::linear, Variant::nonlinear, Variant::alt_linear,
                                Variant::length_preserving}) {
    SchemeConfig cfg;
    cfg.variant = variant;
    cfg.lambda = variant == Variant::length_preserving ? 0.0 : 0.25;
    cfg.dt = 0.005;
    const StepResult reference = step(base, cfg);

    SchemeState moved = base;
    for (Vec2& v : moved.current.vertices) v += shift;
    for (Vec2& v : moved.previous.vertices) v += shift;
    const StepResult translated = step(moved, cfg);

    SchemeState turned = base;
    for (Vec2& v : turned.current.vertices) v = rotate(v);
    for (Vec2& v : turned.previous.vertices) v = rotate(v);
    const StepResult rotated_result = step(turned, cfg);

    for (int j = 0; j < base.current.size(); ++j) {
      if ((translated.positions[j] - (reference.positions[j] + shift)).norm() > 1e-10 ||
          std::abs(translated.curvature[j] - reference.curvature[j]) > 1e-10 ||
          (rotated_result.positions[j] - rotate(reference.positions[j])).norm() > 1e-10 ||
          std::abs(rotated_result.normal_velocity[j] - reference.normal_velocity[j]) > 1e-10) {
        ok = false;
        detail += std::string(" ") + to_string(variant) + " equivariance broken;";
        break;
      }
    }
  }

  if (ok) {
    detail = "translation/rotation equivariance (1e-10), polygon symmetry, unit Jacobian at "
             "step 0: all four steppers";
  }
  return ok;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion(1, "expanding-circle convergence table, linear scheme", criterion1);
  criterion(2, "expanding-circle convergence table, nonlinear scheme", criterion2);
  criterion(3, "unconditional stability across variants and step sizes", criterion3);
  criterion(4, "tube with length penalty reaches the predicted steady circles", criterion4);
  criterion(5, "asymptotic equidistribution of the tube and ellipse runs", criterion5);
  criterion(6, "length preservation and bending decay of the constrained flow", criterion6);
  criterion(7, "assembled systems and solves match dense brute-force oracles", criterion7);
  criterion(8, "symmetry suite across all steppers", criterion8);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 8 criteria passed in %.0fs\n", 8 - failures, seconds);
  return failures;
}
