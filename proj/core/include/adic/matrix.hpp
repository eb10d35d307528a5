#pragma once

#include <span>
#include <vector>

#include "adic/rational.hpp"

namespace adic {

/// Dense non-negative integer matrix, row-major. Used for incidence
/// matrices F_n: rows index level-(n+1) vertices, columns level-n vertices,
/// entry (v, w) is the edge multiplicity between w below and v above.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}
  IntMatrix(size_t rows, size_t cols, std::vector<Int> data);
  static IntMatrix ones(size_t rows, size_t cols);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Int& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const Int& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<Int>& data() const { return data_; }

  bool operator==(const IntMatrix& other) const = default;

  /// First row with no positive entry, if any.
  std::optional<size_t> zero_row() const;
  std::optional<size_t> zero_column() const;

  std::vector<Int> row_sums() const;
  std::vector<Int> column_sums() const;
  /// Common row sum when all rows agree.
  std::optional<Int> equal_row_sum() const;
  std::optional<Int> equal_column_sum() const;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
std::vector<Int> multiply(const IntMatrix& m, std::span<const Int> v);           // m·v
std::vector<Rat> multiply_transpose(const IntMatrix& m, std::span<const Rat> v); // mᵀ·v

/// Dense exact-rational matrix (stochastic matrices, determinant work).
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rat& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const Rat& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> data_;
};

Rat determinant(RatMatrix m);     // square only; Gaussian elimination, exact
size_t rank(RatMatrix m);
size_t rank(const IntMatrix& m);

/// Strong connectivity of the directed graph with an edge i -> j whenever
/// m(i, j) > 0. Square matrices only.
bool irreducible(const IntMatrix& m);

bool all_positive(const IntMatrix& m);

}  // namespace adic
