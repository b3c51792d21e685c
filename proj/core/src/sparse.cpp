#include "curveflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>

namespace curveflow {

CompressedMatrix::CompressedMatrix(int dimension, std::span<const Triplet> entries)
    : matrix_(dimension, dimension) {
  std::vector<Eigen::Triplet<double>> list;
  list.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= dimension || t.col < 0 || t.col >= dimension) {
      throw DimensionError("CompressedMatrix: triplet (" + std::to_string(t.row) + "," +
                           std::to_string(t.col) + ") outside a " + std::to_string(dimension) +
                           "-dimensional matrix");
    }
    list.emplace_back(t.row, t.col, t.value);
  }
  matrix_.setFromTriplets(list.begin(), list.end());
  matrix_.makeCompressed();
}

std::span<const int> CompressedMatrix::col_offsets() const {
  return {matrix_.outerIndexPtr(), static_cast<size_t>(matrix_.outerSize() + 1)};
}

std::span<const int> CompressedMatrix::row_indices() const {
  return {matrix_.innerIndexPtr(), nonzeros()};
}

std::span<const double> CompressedMatrix::values() const {
  return {matrix_.valuePtr(), nonzeros()};
}

double CompressedMatrix::inf_norm() const {
  std::vector<double> row_sum(static_cast<size_t>(matrix_.rows()), 0.0);
  for (int col = 0; col < matrix_.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, col); it; ++it) {
      row_sum[static_cast<size_t>(it.row())] += std::abs(it.value());
    }
  }
  return row_sum.empty() ? 0.0 : *std::max_element(row_sum.begin(), row_sum.end());
}

void CompressedMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const int n = dimension();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) {
    throw DimensionError("CompressedMatrix::multiply: vector size mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
  Eigen::Map<Eigen::VectorXd> yv(y.data(), n);
  yv = matrix_ * xv;
}

struct SparseLu::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> solver;
  Eigen::SparseMatrix<double> matrix;  // kept for residual verification
  double inf_norm = 0.0;
};

namespace {

// Eigen reports singular factorizations through a free-form message that ends
// with the failing column; recover it when present.
int parse_pivot_index(const std::string& message) {
  int value = -1;
  size_t i = message.size();
  while (i > 0 && std::isspace(static_cast<unsigned char>(message[i - 1]))) --i;
  size_t end = i;
  while (i > 0 && std::isdigit(static_cast<unsigned char>(message[i - 1]))) --i;
  if (i < end) value = std::stoi(message.substr(i, end - i));
  return value;
}

void factorize_or_throw(SparseLu::Impl& impl, const CompressedMatrix& A, bool analyze) {
  impl.matrix = A.eigen();
  impl.inf_norm = A.inf_norm();
  if (analyze) impl.solver.analyzePattern(impl.matrix);
  impl.solver.factorize(impl.matrix);
  if (impl.solver.info() != Eigen::Success) {
    const std::string detail = impl.solver.lastErrorMessage();
    throw SingularMatrixError("sparse LU factorization failed: " + detail,
                              parse_pivot_index(detail));
  }
}

}  // namespace

SparseLu::SparseLu(const CompressedMatrix& A) : impl_(std::make_unique<Impl>()) {
  factorize_or_throw(*impl_, A, /*analyze=*/true);
}

SparseLu::~SparseLu() = default;
SparseLu::SparseLu(SparseLu&&) noexcept = default;
SparseLu& SparseLu::operator=(SparseLu&&) noexcept = default;

void SparseLu::refactor(const CompressedMatrix& A) {
  factorize_or_throw(*impl_, A, /*analyze=*/false);
}

std::vector<double> SparseLu::solve(std::span<const double> b) const {
  const int n = static_cast<int>(impl_->matrix.rows());
  if (static_cast<int>(b.size()) != n) {
    throw DimensionError("SparseLu::solve: right-hand side has size " +
                         std::to_string(b.size()) + ", expected " + std::to_string(n));
  }
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  Eigen::VectorXd x = impl_->solver.solve(rhs);
  if (impl_->solver.info() != Eigen::Success) {
    throw SingularMatrixError("sparse LU solve failed after factorization", -1);
  }

  const double residual = (impl_->matrix * x - rhs).lpNorm<Eigen::Infinity>();
  const double scale = std::max(rhs.lpNorm<Eigen::Infinity>(),
                                impl_->inf_norm * x.lpNorm<Eigen::Infinity>());
  if (scale > 0.0 && residual > 1e-10 * scale) {
    throw SingularMatrixError(
        "sparse LU produced an inaccurate solution (relative residual " +
            std::to_string(residual / scale) + "); matrix is numerically singular",
        -1);
  }
  return {x.data(), x.data() + n};
}

std::vector<double> solve(const CompressedMatrix& A, std::span<const double> b) {
  return SparseLu(A).solve(b);
}

}  // namespace curveflow
