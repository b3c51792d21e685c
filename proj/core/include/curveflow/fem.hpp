#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "curveflow/errors.hpp"

namespace curveflow {

using Vec2 = Eigen::Vector2d;

/// Uniform periodic partition of the reference domain R/Z.
///
/// Node j sits at rho_j = j*h with h = 1/J; node J is identified with node 0.
/// Element e spans [rho_e, rho_{e+1}] and connects nodes e and e+1 (mod J).
struct ReferenceMesh {
  explicit ReferenceMesh(int node_count);

  int J = 0;
  double h = 0.0;

  int next(int j) const { return j + 1 == J ? 0 : j + 1; }
  int prev(int j) const { return j == 0 ? J - 1 : j - 1; }
};

/// Continuous piecewise-linear nodal scalar data, periodic.
struct NodalField {
  NodalField() = default;
  explicit NodalField(int J, double value = 0.0) : values(static_cast<size_t>(J), value) {}
  explicit NodalField(std::vector<double> v) : values(std::move(v)) {}

  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int j) { return values[static_cast<size_t>(j)]; }
  double operator[](int j) const { return values[static_cast<size_t>(j)]; }
};

/// One value per element (element-wise constant data).
struct ElementField {
  ElementField() = default;
  explicit ElementField(int J, double value = 0.0) : values(static_cast<size_t>(J), value) {}
  explicit ElementField(std::vector<double> v) : values(std::move(v)) {}

  std::vector<double> values;

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int e) { return values[static_cast<size_t>(e)]; }
  double operator[](int e) const { return values[static_cast<size_t>(e)]; }
};

/// Nodal 2-vector data (vertex positions live in ClosedCurve instead).
struct NodalVectorField {
  NodalVectorField() = default;
  explicit NodalVectorField(int J, Vec2 value = Vec2::Zero())
      : values(static_cast<size_t>(J), value) {}

  std::vector<Vec2> values;

  int size() const { return static_cast<int>(values.size()); }
  Vec2& operator[](int j) { return values[static_cast<size_t>(j)]; }
  const Vec2& operator[](int j) const { return values[static_cast<size_t>(j)]; }
};

/// 3-point Gauss-Legendre rule on [0,1], exact through polynomial degree 5.
struct GaussRule3 {
  std::array<double, 3> node;
  std::array<double, 3> weight;
};
const GaussRule3& gauss3();

/// Element-local view of piecewise data that is affine inside each element
/// with possible jumps at the nodes. Nodal fields interpolate their endpoint
/// nodes; element fields are constant per element.
class PiecewiseScalar {
 public:
  PiecewiseScalar(const NodalField& f)  // NOLINT(google-explicit-constructor)
      : data_(f.values), nodal_(true) {}
  PiecewiseScalar(const ElementField& f)  // NOLINT(google-explicit-constructor)
      : data_(f.values), nodal_(false) {}

  int element_count() const { return static_cast<int>(data_.size()); }

  /// One-sided value at the left end of element e (limit from inside).
  double left(int e) const { return data_[static_cast<size_t>(e)]; }
  /// One-sided value at the right end of element e.
  double right(int e) const {
    if (!nodal_) return data_[static_cast<size_t>(e)];
    const int J = element_count();
    return data_[static_cast<size_t>(e + 1 == J ? 0 : e + 1)];
  }
  /// Value at local coordinate t in [0,1] inside element e.
  double at(int e, double t) const {
    const double l = left(e);
    return l + (right(e) - l) * t;
  }

 private:
  std::span<const double> data_;
  bool nodal_;
};

/// Vector-valued counterpart of PiecewiseScalar.
class PiecewiseVec2 {
 public:
  PiecewiseVec2(const NodalVectorField& f)  // NOLINT(google-explicit-constructor)
      : data_(f.values), nodal_(true) {}
  static PiecewiseVec2 element(std::span<const Vec2> per_element) {
    return PiecewiseVec2(per_element, false);
  }
  static PiecewiseVec2 nodal(std::span<const Vec2> per_node) {
    return PiecewiseVec2(per_node, true);
  }

  int element_count() const { return static_cast<int>(data_.size()); }
  const Vec2& left(int e) const { return data_[static_cast<size_t>(e)]; }
  const Vec2& right(int e) const {
    if (!nodal_) return data_[static_cast<size_t>(e)];
    const int J = element_count();
    return data_[static_cast<size_t>(e + 1 == J ? 0 : e + 1)];
  }
  Vec2 at(int e, double t) const { return left(e) + (right(e) - left(e)) * t; }

 private:
  PiecewiseVec2(std::span<const Vec2> data, bool nodal) : data_(data), nodal_(nodal) {}
  std::span<const Vec2> data_;
  bool nodal_;
};

/// Mass-lumped inner product (u, v)^h with element-constant weight w:
/// (h/2) * sum_e w_e * [ (u.v)(left end of e) + (u.v)(right end of e) ],
/// one-sided limits taken from inside the element.
double lumped_inner(const PiecewiseScalar& u, const PiecewiseScalar& v, const ElementField& w);
double lumped_inner(const PiecewiseVec2& u, const PiecewiseVec2& v, const ElementField& w);

/// Unlumped product: integral of u*v*w over the reference domain with 3-point
/// Gauss-Legendre per element. `degree` is the total polynomial degree of u*v
/// per element and must not exceed 5 (the rule's exactness).
double exact_inner(const PiecewiseScalar& u, const PiecewiseScalar& v, const ElementField& w,
                   int degree);
double exact_inner(const PiecewiseVec2& u, const PiecewiseVec2& v, const ElementField& w,
                   int degree);

/// Integral of u_rho * v_rho * winv over the reference domain. All three
/// factors are element-wise constant, so the sum
/// sum_e (u_{e+1}-u_e)(v_{e+1}-v_e) * winv_e / h is exact.
/// winv holds 1/|X_rho| per element and must be positive.
double stiffness_inner(const NodalField& u, const NodalField& v, const ElementField& winv);

}  // namespace curveflow
