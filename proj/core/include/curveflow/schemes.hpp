#pragma once

#include <optional>
#include <string>

#include "curveflow/curve.hpp"
#include "curveflow/initial_data.hpp"
#include "curveflow/sparse.hpp"

namespace curveflow {

/// The four fully discrete time steppers.
enum class Variant {
  linear,             // semi-implicit, curvature history weighted by sqrt(J^m)
  nonlinear,          // implicit transport terms, solved by Picard iteration
  alt_linear,         // linear scheme with squared-curvature coefficients from
                      // the position-identity curvature
  length_preserving,  // linear scheme with a scalar multiplier enforcing
                      // constant length
};

std::string to_string(Variant variant);
Variant variant_from_string(const std::string& name);

struct SchemeConfig {
  Variant variant = Variant::linear;
  double lambda = 0.0;       // length penalty weight (>= 0)
  double dt = 1e-3;          // time step (> 0)
  double picard_tol = 1e-10; // nodal increment tolerance (nonlinear variant)
  int picard_max = 100;
};

/// Everything a stepper needs: the two position levels, both curvature
/// fields, and bookkeeping. At step 0 `previous` equals `current`, which
/// makes the mesh Jacobian identically 1.
struct SchemeState {
  ClosedCurve current;        // X^m
  ClosedCurve previous;       // X^{m-1}
  NodalField curvature;       // evolved curvature at level m
  NodalField bgn_curvature;   // curvature bound to the position identity
  double time = 0.0;
  int step_index = 0;
  double reference_length = 0.0;  // |Gamma^0|; 0 means "use the pre-step length"
};

SchemeState initial_state(const InitialData& data);

struct StepDiagnostics {
  double energy_before = 0.0;  // variant energy at level m
  double energy_after = 0.0;   // variant energy at level m+1
  double dissipation = 0.0;    // dt * (V, V |X^m_rho|)
  double stability_residual = 0.0;  // energy_after + dissipation - energy_before
  int picard_iters = 0;
  double multiplier = 0.0;         // length-preserving only
  double rel_length_change = 0.0;  // (|Gamma^{m+1}| - |Gamma^0|) / |Gamma^0|
  double length_after = 0.0;
  bool a1_ok = true;  // solvability assumption checks on X^m (warnings)
  bool a2_ok = true;
};

struct StepResult {
  NodalField normal_velocity;  // V^{m+1}
  NodalField curvature;        // evolved curvature at level m+1
  NodalField bgn_curvature;    // position-identity curvature at level m+1
  ClosedCurve positions;       // X^{m+1}
  StepDiagnostics diag;
};

/// Element-wise sqrt(|X^{m-1}_rho| / |X^m_rho|).
ElementField sqrt_jacobian(const ClosedCurve& current, const ClosedCurve& previous);

/// Assembled coefficient matrix and right-hand side for one time step.
/// Unknown layout [V | curvature | X_x | X_y | bgn_curvature | (multiplier)],
/// n = 5J, or 5J+1 for the length-preserving variant.
struct SparseSystem {
  int dimension = 0;
  std::vector<Triplet> entries;
  std::vector<double> rhs;
};

/// Shared row builder for all four variants. `picard_frozen` supplies the
/// frozen position iterate for the nonlinear variant and must be null for
/// the other variants.
SparseSystem assemble(const SchemeState& state, const SchemeConfig& cfg,
                      const ClosedCurve* picard_frozen = nullptr);

/// Reusable factorization storage for time loops: the sparsity pattern of the
/// step systems is fixed for a given (variant, J, lambda) configuration, so
/// the symbolic analysis can be shared across steps.
struct SolverCache {
  std::optional<SparseLu> lu;
  int dimension = -1;
};

StepResult step_linear(const SchemeState& state, const SchemeConfig& cfg,
                       SolverCache* cache = nullptr);
StepResult step_nonlinear(const SchemeState& state, const SchemeConfig& cfg,
                          SolverCache* cache = nullptr);
StepResult step_alt_linear(const SchemeState& state, const SchemeConfig& cfg,
                           SolverCache* cache = nullptr);
StepResult step_length_preserving(const SchemeState& state, const SchemeConfig& cfg,
                                  SolverCache* cache = nullptr);

/// Dispatch on cfg.variant.
StepResult step(const SchemeState& state, const SchemeConfig& cfg, SolverCache* cache = nullptr);

/// Shift the state one level: X^m becomes X^{m-1}, the step result becomes
/// level m, time and index advance.
void advance(SchemeState& state, StepResult result, double dt);

}  // namespace curveflow
