#pragma once

#include <functional>
#include <string>
#include <vector>

#include "curveflow/curve.hpp"

namespace curveflow {

/// Closed map from the reference domain R/Z into the plane.
class Parameterization {
 public:
  using Map = std::function<Vec2(double)>;

  Parameterization(std::string name, Map map, int node_multiple = 1)
      : name_(std::move(name)), map_(std::move(map)), node_multiple_(node_multiple) {}

  const std::string& name() const { return name_; }
  Vec2 operator()(double rho) const { return map_(rho); }
  /// Sampling counts must be a multiple of this (e.g. the lemniscate needs
  /// nodes exactly on its amplitude jumps).
  int node_multiple() const { return node_multiple_; }

 private:
  std::string name_;
  Map map_;
  int node_multiple_;
};

/// Named seeds:
///   circle            unit circle, uniform angles
///   expanding_circle  unit circle at angles g(rho) = 2*pi*rho + 0.1*sin(2*pi*rho)
///   ellipse           (3 cos, 0.5 sin), nonuniform vertex spacing
///   ellipse_uniform   the same ellipse sampled uniformly in arc length
///   tube              8x1 stadium (radius-0.5 caps, length-7 straights), arc length
///   lemniscate        2:1 figure eight with piecewise amplitude
Parameterization make_parameterization(const std::string& name);

/// Closed polygon through the given points, traversed at constant speed per
/// segment; sampling it with J = points.size() reproduces the points.
Parameterization from_vertices(std::vector<Vec2> points);

/// Nodal interpolation: vertex j = param(j/J).
ClosedCurve interpolate(const Parameterization& param, int J);

/// Consistent discrete initial data produced by the projection step.
struct InitialData {
  ClosedCurve positions;         // X^0 = Y^0 + dY
  NodalField curvature;          // evolved curvature at t = 0
  NodalField bgn_curvature;      // equal to curvature at t = 0
  double tangential_shift_max;   // max_j |dY_j|
};

/// Solve the zero-normal-velocity projection on the sampled polygon Y^0:
/// find (dY, kappa) with (nu0 . dY, xi |Y_rho|)^h = 0 for all nodal xi and
/// (kappa nu0, eta |Y_rho|)^h = -((Y+dY)_rho, eta_rho |Y_rho|^{-1}) for all
/// nodal eta. The shift dY moves vertices only tangentially in the lumped
/// sense; the returned curvature is consistent with the shifted polygon.
InitialData bgn_project(const ClosedCurve& sampled);

}  // namespace curveflow
