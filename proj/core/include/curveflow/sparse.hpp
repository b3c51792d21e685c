#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "curveflow/errors.hpp"

namespace curveflow {

/// One coordinate-format matrix entry. Duplicates are summed on compression.
struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Square sparse matrix in compressed-column storage, built from coordinate
/// triplets. Entries are sorted by row within each column and deduplicated.
class CompressedMatrix {
 public:
  CompressedMatrix(int dimension, std::span<const Triplet> entries);

  int dimension() const { return static_cast<int>(matrix_.rows()); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(matrix_.nonZeros()); }

  std::span<const int> col_offsets() const;
  std::span<const int> row_indices() const;
  std::span<const double> values() const;

  /// Maximum absolute row sum.
  double inf_norm() const;
  /// y = A x.
  void multiply(std::span<const double> x, std::span<double> y) const;

  const Eigen::SparseMatrix<double>& eigen() const { return matrix_; }

 private:
  Eigen::SparseMatrix<double> matrix_;
};

/// Direct LU factorization with row pivoting. Immutable after construction
/// (refactor replaces the factors in place for a matrix with the same
/// sparsity pattern); solve() may be called concurrently.
class SparseLu {
 public:
  explicit SparseLu(const CompressedMatrix& A);
  ~SparseLu();
  SparseLu(SparseLu&&) noexcept;
  SparseLu& operator=(SparseLu&&) noexcept;
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  /// Recompute numeric factors for a matrix with the sparsity pattern this
  /// factorization was analyzed with; the symbolic ordering is reused.
  void refactor(const CompressedMatrix& A);

  /// Solve A x = b and verify the relative residual
  /// |A x - b|_inf / max(|b|_inf, |A|_inf |x|_inf) <= 1e-10.
  std::vector<double> solve(std::span<const double> b) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

/// One-shot factor-and-solve.
std::vector<double> solve(const CompressedMatrix& A, std::span<const double> b);

}  // namespace curveflow
