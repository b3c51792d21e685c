#include "curveflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace curveflow {

namespace {

double degeneracy_tolerance(const ClosedCurve& curve) {
  const double diam = bbox_diameter(curve);
  return 1e-14 * std::max(diam, std::numeric_limits<double>::min());
}

}  // namespace

CurveFrame frame(const ClosedCurve& curve) {
  const int J = curve.size();
  if (J < 3) throw DegenerateCurveError("frame: curve needs at least 3 vertices");
  const double h = 1.0 / J;
  const double tol = degeneracy_tolerance(curve);

  CurveFrame f;
  f.length = ElementField(J);
  f.weight = ElementField(J);
  f.inv_weight = ElementField(J);
  f.tangent.resize(static_cast<size_t>(J));
  f.normal.resize(static_cast<size_t>(J));

  for (int e = 0; e < J; ++e) {
    const int n = e + 1 == J ? 0 : e + 1;
    const Vec2 edge = curve[n] - curve[e];
    const double len = edge.norm();
    if (!(len > tol)) {
      throw DegenerateCurveError("frame: zero-length edge at element " + std::to_string(e));
    }
    f.length[e] = len;
    f.weight[e] = len / h;
    f.inv_weight[e] = h / len;
    f.tangent[static_cast<size_t>(e)] = edge / len;
    f.normal[static_cast<size_t>(e)] = -perp(edge / len);
  }
  return f;
}

NodalVectorField vertex_normal(const ClosedCurve& curve) {
  const CurveFrame f = frame(curve);
  const int J = curve.size();
  NodalVectorField omega(J);
  for (int j = 0; j < J; ++j) {
    const int p = j == 0 ? J - 1 : j - 1;
    const Vec2 weighted =
        f.length[p] * f.normal[static_cast<size_t>(p)] + f.length[j] * f.normal[static_cast<size_t>(j)];
    omega[j] = weighted / (f.length[p] + f.length[j]);
  }
  return omega;
}

double mesh_ratio(const ClosedCurve& curve) {
  const CurveFrame f = frame(curve);
  const auto [lo, hi] = std::minmax_element(f.length.values.begin(), f.length.values.end());
  return *hi / *lo;
}

double polygon_length(const ClosedCurve& curve) {
  const int J = curve.size();
  double sum = 0.0;
  for (int e = 0; e < J; ++e) {
    const int n = e + 1 == J ? 0 : e + 1;
    sum += (curve[n] - curve[e]).norm();
  }
  return sum;
}

Vec2 centroid(const ClosedCurve& curve) {
  Vec2 c = Vec2::Zero();
  for (const Vec2& v : curve.vertices) c += v;
  return c / curve.size();
}

double bbox_diameter(const ClosedCurve& curve) {
  if (curve.vertices.empty()) return 0.0;
  Vec2 lo = curve.vertices.front();
  Vec2 hi = lo;
  for (const Vec2& v : curve.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

AssumptionReport check_assumptions(const ClosedCurve& curve, double lambda) {
  const NodalVectorField omega = vertex_normal(curve);
  const double tol = 1e-12 * bbox_diameter(curve);

  AssumptionReport report;
  report.min_vertex_normal = std::numeric_limits<double>::infinity();
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  for (const Vec2& w : omega.values) {
    report.min_vertex_normal = std::min(report.min_vertex_normal, w.norm());
    gram += w * w.transpose();
  }
  report.a1_ok = lambda > 0.0 || report.min_vertex_normal > tol;

  // Smallest singular value of the J x 2 matrix with rows omega_j, via the
  // closed-form eigenvalues of its 2x2 Gram matrix.
  const double tr = gram.trace();
  const double det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lambda_min = std::max(0.0, tr / 2.0 - disc);
  report.span_sigma = std::sqrt(lambda_min);
  report.a2_ok = report.span_sigma > tol;
  return report;
}

namespace {

// Integral of kappa^2 against an element-constant weight, exact.
double bending_integral(const NodalField& curvature, const ElementField& weight) {
  const int J = curvature.size();
  const double h = 1.0 / J;
  double sum = 0.0;
  for (int e = 0; e < J; ++e) {
    const int n = e + 1 == J ? 0 : e + 1;
    const double a = curvature[e];
    const double b = curvature[n];
    sum += weight[e] * h * (a * a + a * b + b * b) / 3.0;
  }
  return sum;
}

}  // namespace

EnergyReport energies(const NodalField& curvature, const ElementField& prev_weight,
                      const ElementField& cur_weight, double lambda) {
  const int J = curvature.size();
  if (prev_weight.size() != J || cur_weight.size() != J) {
    throw DimensionError("energies: weight sizes do not match the curvature field");
  }
  const double h = 1.0 / J;

  EnergyReport report;
  report.lambda = lambda;
  report.bending = 0.5 * bending_integral(curvature, cur_weight);
  double length = 0.0;
  for (int e = 0; e < J; ++e) length += cur_weight[e] * h;
  report.length = length;
  report.linear_energy = 0.5 * bending_integral(curvature, prev_weight) + lambda * length;
  report.bar_energy = report.bending + lambda * length;
  return report;
}

}  // namespace curveflow
