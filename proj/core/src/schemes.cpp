#include "curveflow/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace curveflow {

std::string to_string(Variant variant) {
  switch (variant) {
    case Variant::linear: return "linear";
    case Variant::nonlinear: return "nonlinear";
    case Variant::alt_linear: return "alt_linear";
    case Variant::length_preserving: return "length_preserving";
  }
  return "unknown";
}

Variant variant_from_string(const std::string& name) {
  if (name == "linear") return Variant::linear;
  if (name == "nonlinear") return Variant::nonlinear;
  if (name == "alt_linear") return Variant::alt_linear;
  if (name == "length_preserving") return Variant::length_preserving;
  throw ConfigError("unknown scheme variant '" + name + "'");
}

SchemeState initial_state(const InitialData& data) {
  SchemeState state;
  state.current = data.positions;
  state.previous = data.positions;  // makes the mesh Jacobian 1 at step 0
  state.curvature = data.curvature;
  state.bgn_curvature = data.bgn_curvature;
  state.time = 0.0;
  state.step_index = 0;
  state.reference_length = polygon_length(data.positions);
  return state;
}

ElementField sqrt_jacobian(const ClosedCurve& current, const ClosedCurve& previous) {
  const int J = current.size();
  if (previous.size() != J) {
    throw DimensionError("sqrt_jacobian: curves have different vertex counts");
  }
  const CurveFrame cur = frame(current);
  const CurveFrame prev = frame(previous);
  ElementField field(J);
  for (int e = 0; e < J; ++e) {
    field[e] = std::sqrt(prev.length[e] / cur.length[e]);
  }
  return field;
}

namespace {

void validate_state(const SchemeState& state, const SchemeConfig& cfg) {
  const int J = state.current.size();
  if (J < 3) throw DimensionError("step: state needs at least 3 vertices");
  if (state.previous.size() != J || state.curvature.size() != J ||
      state.bgn_curvature.size() != J) {
    throw DimensionError("step: state fields have inconsistent sizes");
  }
  if (!(cfg.dt > 0.0)) throw ConfigError("step: dt must be positive");
  if (cfg.lambda < 0.0) throw ConfigError("step: lambda must be nonnegative");
  if (!(cfg.picard_tol > 0.0)) throw ConfigError("step: picard_tol must be positive");
}

struct Workspace {
  int J = 0;
  double h = 0.0;
  CurveFrame cur;          // frame of X^m; all step products use these weights
  CurveFrame prev;         // frame of X^{m-1}
  ElementField sqrt_jac;   // sqrt(|X^{m-1}_rho| / |X^m_rho|)
  std::vector<Vec2> weighted_normal;  // len_p*nu_p + len_e*nu_e per vertex
};

Workspace make_workspace(const SchemeState& state) {
  Workspace ws;
  ws.J = state.current.size();
  ws.h = 1.0 / ws.J;
  ws.cur = frame(state.current);
  ws.prev = frame(state.previous);
  ws.sqrt_jac = ElementField(ws.J);
  for (int e = 0; e < ws.J; ++e) {
    ws.sqrt_jac[e] = std::sqrt(ws.prev.length[e] / ws.cur.length[e]);
  }
  ws.weighted_normal.resize(static_cast<size_t>(ws.J));
  for (int j = 0; j < ws.J; ++j) {
    const int p = j == 0 ? ws.J - 1 : j - 1;
    ws.weighted_normal[static_cast<size_t>(j)] =
        ws.cur.length[p] * ws.cur.normal[static_cast<size_t>(p)] +
        ws.cur.length[j] * ws.cur.normal[static_cast<size_t>(j)];
  }
  return ws;
}

// Hat-function values and rho-derivative signs on the reference element.
inline double shape(int p, double t) { return p == 0 ? 1.0 - t : t; }
constexpr double kSlopeSign[2] = {-1.0, 1.0};

}  // namespace

SparseSystem assemble(const SchemeState& state, const SchemeConfig& cfg,
                      const ClosedCurve* picard_frozen) {
  validate_state(state, cfg);
  const bool nonlinear = cfg.variant == Variant::nonlinear;
  if (nonlinear && picard_frozen == nullptr) {
    throw UsageError("assemble: the nonlinear variant needs a frozen Picard iterate");
  }
  if (!nonlinear && picard_frozen != nullptr) {
    throw UsageError("assemble: only the nonlinear variant takes a frozen iterate");
  }

  const Workspace ws = make_workspace(state);
  const int J = ws.J;
  const double h = ws.h;
  const double dt = cfg.dt;
  const bool length_preserving = cfg.variant == Variant::length_preserving;

  SparseSystem system;
  system.dimension = length_preserving ? 5 * J + 1 : 5 * J;
  system.rhs.assign(static_cast<size_t>(system.dimension), 0.0);
  system.entries.reserve(static_cast<size_t>(40 * J));

  const int col_v = 0;
  const int col_curv = J;
  const int col_x = 2 * J;
  const int col_y = 3 * J;
  const int col_bgn = 4 * J;
  const int col_mult = 5 * J;
  const int row_a = 0;
  const int row_b = J;
  const int row_c = 2 * J;
  const int row_dx = 3 * J;
  const int row_dy = 4 * J;

  auto add = [&](int row, int col, double value) {
    system.entries.push_back({row, col, value});
  };

  // The squared-curvature coefficient comes from the evolved curvature except
  // in the alternative linear scheme, which takes it from the
  // position-identity curvature.
  const NodalField& sq_source =
      cfg.variant == Variant::alt_linear ? state.bgn_curvature : state.curvature;

  const GaussRule3& g = gauss3();

  for (int e = 0; e < J; ++e) {
    const int n0 = e;
    const int n1 = e + 1 == J ? 0 : e + 1;
    const int node[2] = {n0, n1};
    const double len = ws.cur.length[e];
    const Vec2 tangent = ws.cur.tangent[static_cast<size_t>(e)];

    // Coefficient samples at the Gauss points.
    double sq_coeff[3];     // squared curvature coefficient
    double curv_m[3];       // evolved curvature at level m
    double transport[3];    // tangential velocity tau . U
    for (int q = 0; q < 3; ++q) {
      const double t = g.node[q];
      const double s = (1.0 - t) * sq_source[n0] + t * sq_source[n1];
      sq_coeff[q] = s * s;
      curv_m[q] = (1.0 - t) * state.curvature[n0] + t * state.curvature[n1];
      Vec2 velocity;
      if (nonlinear) {
        const ClosedCurve& frozen = *picard_frozen;
        velocity = ((1.0 - t) * (frozen[n0] - state.current[n0]) +
                    t * (frozen[n1] - state.current[n1])) /
                   dt;
      } else {
        velocity = ((1.0 - t) * (state.current[n0] - state.previous[n0]) +
                    t * (state.current[n1] - state.previous[n1])) /
                   dt;
      }
      transport[q] = tangent.dot(velocity);
    }

    // Frozen quadratic coefficient of the nonlinear curvature update:
    // (Z - X^m)_rho . Z_rho / |X^m_rho|, element-wise constant.
    double frozen_quad = 0.0;
    if (nonlinear) {
      const ClosedCurve& frozen = *picard_frozen;
      const Vec2 dz = (frozen[n1] - state.current[n1]) - (frozen[n0] - state.current[n0]);
      const Vec2 z_edge = frozen[n1] - frozen[n0];
      frozen_quad = dz.dot(z_edge) / (h * len);
    }

    for (int p = 0; p < 2; ++p) {
      for (int q = 0; q < 2; ++q) {
        double mass = 0.0;         // (trial, test) with weight w
        double mass_sq = 0.0;      // squared-curvature-weighted mass
        double transport_pq = 0.0; // integral of c (trial_rho test - trial test_rho)
        for (int gq = 0; gq < 3; ++gq) {
          const double t = g.node[gq];
          const double np = shape(p, t);
          const double nq = shape(q, t);
          mass += g.weight[gq] * np * nq;
          mass_sq += g.weight[gq] * sq_coeff[gq] * np * nq;
          transport_pq += g.weight[gq] * transport[gq] * (kSlopeSign[p] * nq - np * kSlopeSign[q]);
        }
        mass *= len;
        mass_sq *= len;
        const double stiff = (p == q ? 1.0 : -1.0) / len;

        // (a): (V, phi w) - (curv_rho, phi_rho / w) + 1/2 (sq curv, phi w)
        //      - lambda (bgn, phi w)  [or the multiplier column]
        add(row_a + node[q], col_v + node[p], mass);
        add(row_a + node[q], col_curv + node[p], -stiff + 0.5 * mass_sq);
        if (!length_preserving && cfg.lambda != 0.0) {
          add(row_a + node[q], col_bgn + node[p], -cfg.lambda * mass);
        }

        // (b): (curv/dt, chi w) + (V_rho, chi_rho / w) - 1/2 (sq V, chi w)
        //      - 1/2 transport(curv, chi) [+ frozen quadratic mass, nonlinear]
        add(row_b + node[q], col_curv + node[p], mass / dt - 0.5 * transport_pq);
        add(row_b + node[q], col_v + node[p], stiff - 0.5 * mass_sq);
        if (nonlinear) {
          // No w weight here: the inverse weight is folded into the coefficient.
          double mass_plain = 0.0;
          for (int gq = 0; gq < 3; ++gq) {
            mass_plain += g.weight[gq] * shape(p, g.node[gq]) * shape(q, g.node[gq]);
          }
          add(row_b + node[q], col_curv + node[p],
              frozen_quad * h * mass_plain / (2.0 * dt));
        }

        // (c): -(V, xi w); the lumped position part is nodal, added below.
        add(row_c + node[q], col_v + node[p], -mass);

        // (d): position stiffness against each test component.
        add(row_dx + node[q], col_x + node[p], stiff);
        add(row_dy + node[q], col_y + node[p], stiff);
      }
    }

    // (b) right-hand side: (curv^m sqrt(J^m) / dt, chi w) for the history-
    // weighted variants, (curv^m / dt, chi w) for the nonlinear one.
    const double history = nonlinear ? 1.0 : ws.sqrt_jac[e];
    for (int q = 0; q < 2; ++q) {
      double moment = 0.0;
      for (int gq = 0; gq < 3; ++gq) {
        moment += g.weight[gq] * curv_m[gq] * shape(q, g.node[gq]);
      }
      system.rhs[static_cast<size_t>(row_b + node[q])] += len * history * moment / dt;
    }
  }

  // Nodal (lumped) contributions.
  for (int j = 0; j < J; ++j) {
    const int p = j == 0 ? J - 1 : j - 1;
    const Vec2 wn = ws.weighted_normal[static_cast<size_t>(j)];

    // (c): (nu^m . X/dt, xi w)^h on both sides.
    add(row_c + j, col_x + j, 0.5 * wn.x() / dt);
    add(row_c + j, col_y + j, 0.5 * wn.y() / dt);
    system.rhs[static_cast<size_t>(row_c + j)] += 0.5 * wn.dot(state.current[j]) / dt;

    // (d): (bgn nu^m, eta w)^h.
    add(row_dx + j, col_bgn + j, 0.5 * wn.x());
    add(row_dy + j, col_bgn + j, 0.5 * wn.y());

    if (length_preserving) {
      // Multiplier column of (a) and the lumped constraint row
      // (V, curv_bgn^m w)^h = 0.
      const double lumped = 0.5 * state.bgn_curvature[j] * (ws.cur.length[p] + ws.cur.length[j]);
      add(row_a + j, col_mult, -lumped);
      add(col_mult, col_v + j, lumped);
    }
  }

  return system;
}

namespace {

std::vector<double> factor_and_solve(const SparseSystem& system, SolverCache* cache,
                                     const SchemeState& state, const SchemeConfig& cfg) {
  const CompressedMatrix matrix(system.dimension, system.entries);
  try {
    if (cache != nullptr) {
      if (cache->lu.has_value() && cache->dimension == system.dimension) {
        cache->lu->refactor(matrix);
      } else {
        cache->lu.emplace(matrix);
        cache->dimension = system.dimension;
      }
      return cache->lu->solve(system.rhs);
    }
    return solve(matrix, system.rhs);
  } catch (const SingularMatrixError& err) {
    const AssumptionReport report = check_assumptions(state.current, cfg.lambda);
    throw SingularMatrixError(
        std::string("step system is singular [") + err.what() + "]; assumption checks: (A1) " +
            (report.a1_ok ? "ok" : "VIOLATED") + ", (A2) " + (report.a2_ok ? "ok" : "VIOLATED"),
        err.pivot_index);
  }
}

struct RawSolution {
  NodalField velocity;
  NodalField curvature;
  NodalField bgn_curvature;
  ClosedCurve positions;
  double multiplier = 0.0;
};

RawSolution split_solution(const std::vector<double>& u, int J, bool has_multiplier) {
  RawSolution out;
  out.velocity = NodalField(J);
  out.curvature = NodalField(J);
  out.bgn_curvature = NodalField(J);
  out.positions.vertices.resize(static_cast<size_t>(J));
  for (int j = 0; j < J; ++j) {
    out.velocity[j] = u[static_cast<size_t>(j)];
    out.curvature[j] = u[static_cast<size_t>(J + j)];
    out.positions[j] = Vec2(u[static_cast<size_t>(2 * J + j)], u[static_cast<size_t>(3 * J + j)]);
    out.bgn_curvature[j] = u[static_cast<size_t>(4 * J + j)];
  }
  if (has_multiplier) out.multiplier = u[static_cast<size_t>(5 * J)];
  return out;
}

StepResult finalize(const SchemeState& state, const SchemeConfig& cfg, RawSolution solution,
                    int picard_iters) {
  const CurveFrame cur = frame(state.current);
  const CurveFrame prev = frame(state.previous);
  const CurveFrame next = frame(solution.positions);

  StepResult result;
  result.normal_velocity = std::move(solution.velocity);
  result.curvature = std::move(solution.curvature);
  result.bgn_curvature = std::move(solution.bgn_curvature);
  result.positions = std::move(solution.positions);

  StepDiagnostics& diag = result.diag;
  diag.picard_iters = picard_iters;
  diag.multiplier = solution.multiplier;
  diag.dissipation =
      cfg.dt * exact_inner(result.normal_velocity, result.normal_velocity, cur.weight, 2);

  switch (cfg.variant) {
    case Variant::linear:
    case Variant::alt_linear:
      // Curvature weighted by the previous mesh, length by the current one.
      diag.energy_before =
          energies(state.curvature, prev.weight, cur.weight, cfg.lambda).linear_energy;
      diag.energy_after =
          energies(result.curvature, cur.weight, next.weight, cfg.lambda).linear_energy;
      break;
    case Variant::nonlinear:
      diag.energy_before =
          energies(state.curvature, cur.weight, cur.weight, cfg.lambda).bar_energy;
      diag.energy_after =
          energies(result.curvature, next.weight, next.weight, cfg.lambda).bar_energy;
      break;
    case Variant::length_preserving:
      diag.energy_before = energies(state.curvature, prev.weight, cur.weight, 0.0).linear_energy;
      diag.energy_after = energies(result.curvature, cur.weight, next.weight, 0.0).linear_energy;
      break;
  }
  diag.stability_residual = diag.energy_after + diag.dissipation - diag.energy_before;

  diag.length_after = polygon_length(result.positions);
  const double reference = state.reference_length > 0.0 ? state.reference_length
                                                        : polygon_length(state.current);
  diag.rel_length_change = (diag.length_after - reference) / reference;

  const AssumptionReport assumptions = check_assumptions(state.current, cfg.lambda);
  diag.a1_ok = assumptions.a1_ok;
  diag.a2_ok = assumptions.a2_ok;
  return result;
}

StepResult single_solve_step(const SchemeState& state, const SchemeConfig& cfg,
                             SolverCache* cache) {
  const SparseSystem system = assemble(state, cfg);
  const std::vector<double> u = factor_and_solve(system, cache, state, cfg);
  return finalize(state, cfg,
                  split_solution(u, state.current.size(),
                                 cfg.variant == Variant::length_preserving),
                  0);
}

}  // namespace

StepResult step_linear(const SchemeState& state, const SchemeConfig& cfg, SolverCache* cache) {
  SchemeConfig local = cfg;
  local.variant = Variant::linear;
  return single_solve_step(state, local, cache);
}

StepResult step_alt_linear(const SchemeState& state, const SchemeConfig& cfg,
                           SolverCache* cache) {
  SchemeConfig local = cfg;
  local.variant = Variant::alt_linear;
  return single_solve_step(state, local, cache);
}

StepResult step_length_preserving(const SchemeState& state, const SchemeConfig& cfg,
                                  SolverCache* cache) {
  SchemeConfig local = cfg;
  local.variant = Variant::length_preserving;
  double max_bgn = 0.0;
  for (const double k : state.bgn_curvature.values) {
    max_bgn = std::max(max_bgn, std::abs(k));
  }
  if (max_bgn == 0.0) {
    throw SingularMatrixError(
        "length-preserving step: the position-identity curvature vanishes identically, the "
        "bordered system is singular",
        -1);
  }
  return single_solve_step(state, local, cache);
}

StepResult step_nonlinear(const SchemeState& state, const SchemeConfig& cfg,
                          SolverCache* cache) {
  SchemeConfig local = cfg;
  local.variant = Variant::nonlinear;
  validate_state(state, local);

  const int J = state.current.size();
  ClosedCurve frozen = state.current;  // X^{m+1,0} = X^m
  NodalField last_curvature = state.curvature;

  RawSolution accepted;
  double increment = 0.0;
  for (int iteration = 1; iteration <= local.picard_max; ++iteration) {
    const SparseSystem system = assemble(state, local, &frozen);
    const std::vector<double> u = factor_and_solve(system, cache, state, local);
    RawSolution candidate = split_solution(u, J, false);

    increment = 0.0;
    for (int j = 0; j < J; ++j) {
      increment = std::max(increment, (candidate.positions[j] - frozen[j]).norm());
      increment = std::max(increment, std::abs(candidate.curvature[j] - last_curvature[j]));
    }
    frozen = candidate.positions;
    last_curvature = candidate.curvature;
    accepted = std::move(candidate);

    if (increment <= local.picard_tol) {
      return finalize(state, local, std::move(accepted), iteration);
    }
  }
  throw IterationFailureError(
      "nonlinear step: Picard iteration did not reach tol " + std::to_string(local.picard_tol) +
          " within " + std::to_string(local.picard_max) + " iterations (last increment " +
          std::to_string(increment) + ")",
      increment, local.picard_max);
}

StepResult step(const SchemeState& state, const SchemeConfig& cfg, SolverCache* cache) {
  switch (cfg.variant) {
    case Variant::linear: return step_linear(state, cfg, cache);
    case Variant::nonlinear: return step_nonlinear(state, cfg, cache);
    case Variant::alt_linear: return step_alt_linear(state, cfg, cache);
    case Variant::length_preserving: return step_length_preserving(state, cfg, cache);
  }
  throw ConfigError("step: unknown variant");
}

void advance(SchemeState& state, StepResult result, double dt) {
  state.previous = std::move(state.current);
  state.current = std::move(result.positions);
  state.curvature = std::move(result.curvature);
  state.bgn_curvature = std::move(result.bgn_curvature);
  state.time += dt;
  state.step_index += 1;
}

}  // namespace curveflow
