#pragma once

#include <vector>

#include "curveflow/fem.hpp"

namespace curveflow {

/// Counterclockwise quarter turn: perp((a,b)) = (-b, a).
inline Vec2 perp(const Vec2& a) { return Vec2(-a.y(), a.x()); }

/// Closed polygonal curve: J vertices X(rho_j) with periodic indexing.
/// Edge e runs from vertex e to vertex e+1 (mod J) and must not collapse.
struct ClosedCurve {
  ClosedCurve() = default;
  explicit ClosedCurve(std::vector<Vec2> pts) : vertices(std::move(pts)) {}

  std::vector<Vec2> vertices;

  int size() const { return static_cast<int>(vertices.size()); }
  Vec2& operator[](int j) { return vertices[static_cast<size_t>(j)]; }
  const Vec2& operator[](int j) const { return vertices[static_cast<size_t>(j)]; }
};

/// Edge quantities of a polygonal curve. normal[e] = -perp(tangent[e]), which
/// points outward on counterclockwise curves; the discrete curvature of a
/// counterclockwise circle of radius r is then close to -1/r.
struct CurveFrame {
  ElementField length;      // |edge e|
  ElementField weight;      // |X_rho| = |edge|/h per element
  ElementField inv_weight;  // h/|edge|
  std::vector<Vec2> tangent;
  std::vector<Vec2> normal;
};

CurveFrame frame(const ClosedCurve& curve);

/// Length-weighted average of the two edge normals adjacent to each vertex.
/// Satisfies (omega, xi |X_rho|)^h = (nu, xi |X_rho|) for all nodal xi.
NodalVectorField vertex_normal(const ClosedCurve& curve);

/// max over min edge length; 1 on an equidistributed curve.
double mesh_ratio(const ClosedCurve& curve);

double polygon_length(const ClosedCurve& curve);
Vec2 centroid(const ClosedCurve& curve);
/// Diagonal of the axis-aligned bounding box (degeneracy tolerance scale).
double bbox_diameter(const ClosedCurve& curve);

/// Solvability checks for the step systems:
///   a1: lambda > 0, or no vertex normal vanishes;
///   a2: the vertex normals span the plane.
struct AssumptionReport {
  bool a1_ok = true;
  bool a2_ok = true;
  double min_vertex_normal = 0.0;  // min_j |omega_j|
  double span_sigma = 0.0;         // smallest singular value of the omega bundle
};
AssumptionReport check_assumptions(const ClosedCurve& curve, double lambda);

/// Discrete energies of a curvature field against element weights.
/// The bending integrals are exact: kappa^2 is quadratic per element, so each
/// element contributes (measure/3)*(k_a^2 + k_a*k_b + k_b^2).
struct EnergyReport {
  double bending = 0.0;        // 1/2 (kappa^2, cur_weight)
  double length = 0.0;         // current curve length
  double linear_energy = 0.0;  // 1/2 (kappa^2, prev_weight) + lambda*length
  double bar_energy = 0.0;     // bending + lambda*length
  double lambda = 0.0;
};
EnergyReport energies(const NodalField& curvature, const ElementField& prev_weight,
                      const ElementField& cur_weight, double lambda);

}  // namespace curveflow
