#include "curveflow/fem.hpp"

#include <cmath>
#include <string>

namespace curveflow {

ReferenceMesh::ReferenceMesh(int node_count) : J(node_count), h(1.0 / node_count) {
  if (node_count < 3) {
    throw DimensionError("reference mesh needs at least 3 nodes, got " +
                         std::to_string(node_count));
  }
}

const GaussRule3& gauss3() {
  static const GaussRule3 rule = [] {
    const double offset = std::sqrt(15.0) / 10.0;
    GaussRule3 r;
    r.node = {0.5 - offset, 0.5, 0.5 + offset};
    r.weight = {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

namespace {

void require_same_size(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": field sizes differ (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double lumped_inner(const PiecewiseScalar& u, const PiecewiseScalar& v, const ElementField& w) {
  const int J = u.element_count();
  require_same_size(J, v.element_count(), "lumped_inner");
  require_same_size(J, w.size(), "lumped_inner");
  const double h = 1.0 / J;
  double sum = 0.0;
  for (int e = 0; e < J; ++e) {
    sum += w[e] * (u.left(e) * v.left(e) + u.right(e) * v.right(e));
  }
  return 0.5 * h * sum;
}

double lumped_inner(const PiecewiseVec2& u, const PiecewiseVec2& v, const ElementField& w) {
  const int J = u.element_count();
  require_same_size(J, v.element_count(), "lumped_inner");
  require_same_size(J, w.size(), "lumped_inner");
  const double h = 1.0 / J;
  double sum = 0.0;
  for (int e = 0; e < J; ++e) {
    sum += w[e] * (u.left(e).dot(v.left(e)) + u.right(e).dot(v.right(e)));
  }
  return 0.5 * h * sum;
}

double exact_inner(const PiecewiseScalar& u, const PiecewiseScalar& v, const ElementField& w,
                   int degree) {
  if (degree > 5) {
    throw UnsupportedDegreeError("exact_inner: integrand degree " + std::to_string(degree) +
                                 " exceeds the 3-point Gauss exactness (5)");
  }
  const int J = u.element_count();
  require_same_size(J, v.element_count(), "exact_inner");
  require_same_size(J, w.size(), "exact_inner");
  const double h = 1.0 / J;
  const GaussRule3& g = gauss3();
  double sum = 0.0;
  for (int e = 0; e < J; ++e) {
    double local = 0.0;
    for (int q = 0; q < 3; ++q) {
      local += g.weight[q] * u.at(e, g.node[q]) * v.at(e, g.node[q]);
    }
    sum += w[e] * local;
  }
  return h * sum;
}

double exact_inner(const PiecewiseVec2& u, const PiecewiseVec2& v, const ElementField& w,
                   int degree) {
  if (degree > 5) {
    throw UnsupportedDegreeError("exact_inner: integrand degree " + std::to_string(degree) +
                                 " exceeds the 3-point Gauss exactness (5)");
  }
  const int J = u.element_count();
  require_same_size(J, v.element_count(), "exact_inner");
  require_same_size(J, w.size(), "exact_inner");
  const double h = 1.0 / J;
  const GaussRule3& g = gauss3();
  double sum = 0.0;
  for (int e = 0; e < J; ++e) {
    double local = 0.0;
    for (int q = 0; q < 3; ++q) {
      local += g.weight[q] * u.at(e, g.node[q]).dot(v.at(e, g.node[q]));
    }
    sum += w[e] * local;
  }
  return h * sum;
}

double stiffness_inner(const NodalField& u, const NodalField& v, const ElementField& winv) {
  const int J = u.size();
  require_same_size(J, v.size(), "stiffness_inner");
  require_same_size(J, winv.size(), "stiffness_inner");
  const double h = 1.0 / J;
  double sum = 0.0;
  for (int e = 0; e < J; ++e) {
    if (!(winv[e] > 0.0)) {
      throw DegenerateCurveError("stiffness_inner: nonpositive inverse weight on element " +
                                 std::to_string(e));
    }
    const int n = e + 1 == J ? 0 : e + 1;
    sum += (u[n] - u[e]) * (v[n] - v[e]) * winv[e];
  }
  return sum / h;
}

}  // namespace curveflow
