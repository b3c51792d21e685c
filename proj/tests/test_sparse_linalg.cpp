#include <doctest.h>

#include <algorithm>
#include <random>

#include "curveflow/initial_data.hpp"
#include "curveflow/schemes.hpp"
#include "curveflow/sparse.hpp"
#include "oracles.hpp"

using namespace curveflow;

TEST_CASE("identity solve returns the right-hand side") {
  const int n = 5;
  std::vector<Triplet> entries;
  for (int i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
  const CompressedMatrix matrix(n, entries);
  const std::vector<double> b = {1.0, -2.0, 3.5, 0.0, 7.25};
  const std::vector<double> x = solve(matrix, b);
  for (int i = 0; i < n; ++i) CHECK(x[static_cast<size_t>(i)] == b[static_cast<size_t>(i)]);
}

TEST_CASE("hand-solvable 2x2 system") {
  const std::vector<Triplet> entries = {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 3.0}};
  const std::vector<double> x = solve(CompressedMatrix(2, entries), std::vector<double>{3.0, 4.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("compression sums duplicates and sorts rows within columns") {
  const std::vector<Triplet> entries = {
      {1, 0, 2.0}, {0, 0, 1.0}, {1, 0, 0.5}, {2, 2, 4.0}, {0, 2, 3.0}};
  const CompressedMatrix matrix(3, entries);
  CHECK(matrix.nonzeros() == 4);
  const auto offsets = matrix.col_offsets();
  const auto rows = matrix.row_indices();
  const auto values = matrix.values();
  CHECK(offsets[0] == 0);
  CHECK(offsets[1] == 2);  // column 0 holds rows 0 and 1
  CHECK(offsets[2] == 2);  // column 1 empty
  CHECK(offsets[3] == 4);
  CHECK(rows[0] == 0);
  CHECK(rows[1] == 1);
  CHECK(values[1] == doctest::Approx(2.5));  // 2.0 + 0.5 summed
  CHECK(rows[2] == 0);
  CHECK(rows[3] == 2);

  CHECK_THROWS_AS(CompressedMatrix(2, std::vector<Triplet>{{2, 0, 1.0}}), DimensionError);
}

namespace {

// A realistic step-system pattern: the linear-scheme matrix at J = 12 is a
// well-conditioned nonsymmetric sparse 60x60 system.
SparseSystem realistic_system() {
  const InitialData data = bgn_project(interpolate(make_parameterization("ellipse"), 12));
  SchemeState state = initial_state(data);
  SchemeConfig cfg;
  cfg.variant = Variant::linear;
  cfg.lambda = 0.25;
  cfg.dt = 1e-2;
  return assemble(state, cfg);
}

std::vector<std::vector<double>> to_dense(int n, const std::vector<Triplet>& entries) {
  std::vector<std::vector<double>> dense(static_cast<size_t>(n),
                                         std::vector<double>(static_cast<size_t>(n), 0.0));
  for (const Triplet& t : entries) dense[static_cast<size_t>(t.row)][static_cast<size_t>(t.col)] += t.value;
  return dense;
}

}  // namespace

TEST_CASE("sparse solve matches dense Gaussian elimination on a 60x60 step matrix") {
  const SparseSystem system = realistic_system();
  REQUIRE(system.dimension == 60);
  const std::vector<double> sparse_x =
      solve(CompressedMatrix(system.dimension, system.entries), system.rhs);
  const std::vector<double> dense_x =
      oracle::dense_solve(to_dense(system.dimension, system.entries), system.rhs);
  double scale = 0.0;
  for (const double v : dense_x) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < system.dimension; ++i) {
    CHECK(sparse_x[static_cast<size_t>(i)] ==
          doctest::Approx(dense_x[static_cast<size_t>(i)]).epsilon(1e-11).scale(scale));
  }
}

TEST_CASE("solve recovers a known solution: x0 from b = A x0") {
  const SparseSystem system = realistic_system();
  const int n = system.dimension;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x0(static_cast<size_t>(n));
  for (double& v : x0) v = dist(rng);
  const CompressedMatrix matrix(n, system.entries);
  std::vector<double> b(static_cast<size_t>(n));
  matrix.multiply(x0, b);
  const std::vector<double> x = solve(matrix, b);
  for (int i = 0; i < n; ++i) {
    CHECK(x[static_cast<size_t>(i)] == doctest::Approx(x0[static_cast<size_t>(i)]).epsilon(1e-10));
  }
}

TEST_CASE("triplet insertion order does not change the solution") {
  const SparseSystem system = realistic_system();
  std::vector<Triplet> shuffled = system.entries;
  std::mt19937 rng(99);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const std::vector<double> a = solve(CompressedMatrix(system.dimension, system.entries), system.rhs);
  const std::vector<double> b = solve(CompressedMatrix(system.dimension, shuffled), system.rhs);
  double scale = 0.0;
  for (const double v : a) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13).scale(scale));
  }
}

TEST_CASE("structurally singular matrices raise a singular-matrix error") {
  // column 1 is empty
  const std::vector<Triplet> entries = {{0, 0, 1.0}, {1, 0, 2.0}};
  CHECK_THROWS_AS(solve(CompressedMatrix(2, entries), std::vector<double>{1.0, 1.0}),
                  SingularMatrixError);
}

TEST_CASE("numerically singular matrices raise a singular-matrix error") {
  // two proportional rows
  const std::vector<Triplet> entries = {
      {0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}};
  CHECK_THROWS_AS(solve(CompressedMatrix(2, entries), std::vector<double>{1.0, 1.0}),
                  SingularMatrixError);
}

TEST_CASE("a shared factorization solves multiple right-hand sides") {
  const SparseSystem system = realistic_system();
  const CompressedMatrix matrix(system.dimension, system.entries);
  const SparseLu lu(matrix);
  const std::vector<double> x1 = lu.solve(system.rhs);
  std::vector<double> doubled = system.rhs;
  for (double& v : doubled) v *= 2.0;
  const std::vector<double> x2 = lu.solve(doubled);
  for (size_t i = 0; i < x1.size(); ++i) {
    CHECK(x2[i] == doctest::Approx(2.0 * x1[i]).epsilon(1e-12));
  }
}
