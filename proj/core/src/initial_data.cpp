#include "curveflow/initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curveflow/sparse.hpp"

namespace curveflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2 circle_map(double rho) { return {std::cos(kTwoPi * rho), std::sin(kTwoPi * rho)}; }

Vec2 expanding_circle_map(double rho) {
  const double g = kTwoPi * rho + 0.1 * std::sin(kTwoPi * rho);
  return {std::cos(g), std::sin(g)};
}

Vec2 ellipse_map(double rho) {
  return {3.0 * std::cos(kTwoPi * rho), 0.5 * std::sin(kTwoPi * rho)};
}

Vec2 lemniscate_map(double rho) {
  const double a = (rho >= 0.25 && rho <= 0.75) ? 1.0 : 2.0;
  const double c = std::cos(kTwoPi * rho);
  const double s = std::sin(kTwoPi * rho);
  const double denom = 1.0 + s * s;
  return {a * c / denom, a * c * s / denom};
}

// 8x1 stadium traversed counterclockwise at unit speed: right cap (radius
// 0.5 about (3.5, 0)), top straight, left cap, bottom straight.
Vec2 stadium_map(double rho) {
  const double cap = std::numbers::pi / 2.0;  // semicircle of radius 0.5
  const double perimeter = 14.0 + 2.0 * cap;
  double s = rho * perimeter;
  if (s < cap) {
    const double theta = -std::numbers::pi / 2.0 + 2.0 * s;
    return {3.5 + 0.5 * std::cos(theta), 0.5 * std::sin(theta)};
  }
  s -= cap;
  if (s < 7.0) return {3.5 - s, 0.5};
  s -= 7.0;
  if (s < cap) {
    const double theta = std::numbers::pi / 2.0 + 2.0 * s;
    return {-3.5 + 0.5 * std::cos(theta), 0.5 * std::sin(theta)};
  }
  s -= cap;
  return {-3.5 + s, -0.5};
}

// Uniform-arc-length reparameterization via a dense cumulative chord table.
Parameterization::Map arclength_uniform(Parameterization::Map map, int samples = 16384) {
  std::vector<double> cumulative(static_cast<size_t>(samples) + 1, 0.0);
  Vec2 prev = map(0.0);
  for (int i = 1; i <= samples; ++i) {
    const Vec2 cur = map(static_cast<double>(i) / samples);
    cumulative[static_cast<size_t>(i)] =
        cumulative[static_cast<size_t>(i - 1)] + (cur - prev).norm();
    prev = cur;
  }
  const double total = cumulative.back();
  return [map = std::move(map), cumulative = std::move(cumulative), samples,
          total](double rho) -> Vec2 {
    rho -= std::floor(rho);
    const double target = rho * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const int hi = std::clamp(static_cast<int>(it - cumulative.begin()), 1, samples);
    const double s0 = cumulative[static_cast<size_t>(hi - 1)];
    const double s1 = cumulative[static_cast<size_t>(hi)];
    const double frac = s1 > s0 ? (target - s0) / (s1 - s0) : 0.0;
    return map((hi - 1 + frac) / samples);
  };
}

}  // namespace

Parameterization make_parameterization(const std::string& name) {
  if (name == "circle") return {name, circle_map};
  if (name == "expanding_circle") return {name, expanding_circle_map};
  if (name == "ellipse") return {name, ellipse_map};
  if (name == "ellipse_uniform") return {name, arclength_uniform(ellipse_map)};
  if (name == "tube" || name == "stadium") return {name, stadium_map};
  if (name == "lemniscate") return {name, lemniscate_map, 4};
  throw ConfigError("unknown parameterization '" + name + "'");
}

Parameterization from_vertices(std::vector<Vec2> points) {
  if (points.size() < 3) {
    throw ConfigError("a vertex-list seed needs at least 3 points, got " +
                      std::to_string(points.size()));
  }
  const int n = static_cast<int>(points.size());
  return {"vertices", [points = std::move(points), n](double rho) -> Vec2 {
            rho -= std::floor(rho);
            const double scaled = rho * n;
            const int seg = std::min(static_cast<int>(scaled), n - 1);
            const double t = scaled - seg;
            const Vec2& a = points[static_cast<size_t>(seg)];
            const Vec2& b = points[static_cast<size_t>((seg + 1) % n)];
            return a + t * (b - a);
          }};
}

ClosedCurve interpolate(const Parameterization& param, int J) {
  if (J < 3) throw ConfigError("interpolate: J must be at least 3");
  if (J % param.node_multiple() != 0) {
    throw ConfigError("interpolate: seed '" + param.name() + "' requires J to be a multiple of " +
                      std::to_string(param.node_multiple()));
  }
  ClosedCurve curve;
  curve.vertices.resize(static_cast<size_t>(J));
  for (int j = 0; j < J; ++j) {
    curve[j] = param(static_cast<double>(j) / J);
  }
  // Reject coincident adjacent samples before any FEM code sees the polygon.
  const double tol = 1e-14 * std::max(bbox_diameter(curve), 1e-300);
  for (int j = 0; j < J; ++j) {
    if ((curve[(j + 1) % J] - curve[j]).norm() <= tol) {
      throw DegenerateCurveError("interpolate: coincident adjacent samples at node " +
                                 std::to_string(j));
    }
  }
  return curve;
}

InitialData bgn_project(const ClosedCurve& sampled) {
  const int J = sampled.size();
  const double h = 1.0 / J;
  const CurveFrame f = frame(sampled);

  // Unknowns [dY_x | dY_y | kappa], 3J in total.
  // Rows 0..J-1:    lumped tangential constraint (nu0 . dY, xi)^h = 0.
  // Rows J..3J-1:   (kappa nu0, eta)^h + (dY_rho, eta_rho / w) = -(Y_rho, eta_rho / w)
  //                 for eta = hat_i e_x (rows J+i) and hat_i e_y (rows 2J+i).
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(12 * J));
  std::vector<double> rhs(static_cast<size_t>(3 * J), 0.0);

  const int col_dx = 0;
  const int col_dy = J;
  const int col_kappa = 2 * J;

  for (int i = 0; i < J; ++i) {
    const int p = i == 0 ? J - 1 : i - 1;
    const Vec2 weighted_normal =
        f.length[p] * f.normal[static_cast<size_t>(p)] + f.length[i] * f.normal[static_cast<size_t>(i)];

    entries.push_back({i, col_dx + i, 0.5 * weighted_normal.x()});
    entries.push_back({i, col_dy + i, 0.5 * weighted_normal.y()});

    entries.push_back({J + i, col_kappa + i, 0.5 * weighted_normal.x()});
    entries.push_back({2 * J + i, col_kappa + i, 0.5 * weighted_normal.y()});

    // Periodic P1 stiffness row for each displacement component: the hat at
    // node i sees elements p and i with inverse weights h/len.
    const double diag = (f.inv_weight[p] + f.inv_weight[i]) / h;
    const double off_p = -f.inv_weight[p] / h;
    const double off_n = -f.inv_weight[i] / h;
    const int n = i + 1 == J ? 0 : i + 1;
    entries.push_back({J + i, col_dx + i, diag});
    entries.push_back({J + i, col_dx + p, off_p});
    entries.push_back({J + i, col_dx + n, off_n});
    entries.push_back({2 * J + i, col_dy + i, diag});
    entries.push_back({2 * J + i, col_dy + p, off_p});
    entries.push_back({2 * J + i, col_dy + n, off_n});

    // -(Y_rho, eta_rho / w) reduces to the difference of unit tangents.
    const Vec2 tangent_jump = f.tangent[static_cast<size_t>(i)] - f.tangent[static_cast<size_t>(p)];
    rhs[static_cast<size_t>(J + i)] = tangent_jump.x();
    rhs[static_cast<size_t>(2 * J + i)] = tangent_jump.y();
  }

  std::vector<double> solution;
  try {
    solution = solve(CompressedMatrix(3 * J, entries), rhs);
  } catch (const SingularMatrixError& err) {
    throw SingularMatrixError(
        std::string("bgn_project: projection system is singular; the sampled polygon violates "
                    "the solvability assumptions (A1)/(A2) on its vertex normals [") +
            err.what() + "]",
        err.pivot_index);
  }

  InitialData data;
  data.positions = sampled;
  data.curvature = NodalField(J);
  data.tangential_shift_max = 0.0;
  for (int j = 0; j < J; ++j) {
    const Vec2 shift(solution[static_cast<size_t>(col_dx + j)],
                     solution[static_cast<size_t>(col_dy + j)]);
    data.positions[j] += shift;
    data.curvature[j] = solution[static_cast<size_t>(col_kappa + j)];
    data.tangential_shift_max = std::max(data.tangential_shift_max, shift.norm());
  }
  data.bgn_curvature = data.curvature;
  return data;
}

}  // namespace curveflow
