#include "adic/matrix.hpp"

#include <algorithm>

namespace adic {

IntMatrix::IntMatrix(size_t rows, size_t cols, std::vector<Int> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_)
    throw Error("bad-matrix", "matrix data size does not match dimensions");
}

IntMatrix IntMatrix::ones(size_t rows, size_t cols) {
  IntMatrix m(rows, cols);
  for (auto& x : m.data_) x = 1;
  return m;
}

std::optional<size_t> IntMatrix::zero_row() const {
  for (size_t r = 0; r < rows_; ++r) {
    bool any = false;
    for (size_t c = 0; c < cols_ && !any; ++c) any = at(r, c) > 0;
    if (!any) return r;
  }
  return std::nullopt;
}

std::optional<size_t> IntMatrix::zero_column() const {
  for (size_t c = 0; c < cols_; ++c) {
    bool any = false;
    for (size_t r = 0; r < rows_ && !any; ++r) any = at(r, c) > 0;
    if (!any) return c;
  }
  return std::nullopt;
}

std::vector<Int> IntMatrix::row_sums() const {
  std::vector<Int> out(rows_, Int(0));
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) out[r] += at(r, c);
  return out;
}

std::vector<Int> IntMatrix::column_sums() const {
  std::vector<Int> out(cols_, Int(0));
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) out[c] += at(r, c);
  return out;
}

std::optional<Int> IntMatrix::equal_row_sum() const {
  auto sums = row_sums();
  if (sums.empty()) return std::nullopt;
  for (const auto& s : sums)
    if (s != sums[0]) return std::nullopt;
  return sums[0];
}

std::optional<Int> IntMatrix::equal_column_sum() const {
  auto sums = column_sums();
  if (sums.empty()) return std::nullopt;
  for (const auto& s : sums)
    if (s != sums[0]) return std::nullopt;
  return sums[0];
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error("dimension-mismatch", "matrix product shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (size_t j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

std::vector<Int> multiply(const IntMatrix& m, std::span<const Int> v) {
  if (m.cols() != v.size()) throw Error("dimension-mismatch", "matrix-vector shape mismatch");
  std::vector<Int> out(m.rows(), Int(0));
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) out[r] += m.at(r, c) * v[c];
  return out;
}

std::vector<Rat> multiply_transpose(const IntMatrix& m, std::span<const Rat> v) {
  if (m.rows() != v.size())
    throw Error("dimension-mismatch", "transpose matrix-vector shape mismatch");
  std::vector<Rat> out(m.cols(), Rat(0));
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) out[c] += Rat(m.at(r, c)) * v[r];
  return out;
}

Rat determinant(RatMatrix m) {
  if (m.rows() != m.cols()) throw Error("bad-matrix", "determinant of non-square matrix");
  const size_t n = m.rows();
  Rat det(1);
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && m.at(pivot, col) == 0) ++pivot;
    if (pivot == n) return Rat(0);
    if (pivot != col) {
      for (size_t c = col; c < n; ++c) std::swap(m.at(pivot, c), m.at(col, c));
      det = -det;
    }
    det *= m.at(col, col);
    for (size_t r = col + 1; r < n; ++r) {
      if (m.at(r, col) == 0) continue;
      Rat f = m.at(r, col) / m.at(col, col);
      for (size_t c = col; c < n; ++c) m.at(r, c) -= f * m.at(col, c);
    }
  }
  return det;
}

size_t rank(RatMatrix m) {
  const size_t rows = m.rows(), cols = m.cols();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pivot = r;
    while (pivot < rows && m.at(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r)
      for (size_t j = c; j < cols; ++j) std::swap(m.at(pivot, j), m.at(r, j));
    for (size_t i = r + 1; i < rows; ++i) {
      if (m.at(i, c) == 0) continue;
      Rat f = m.at(i, c) / m.at(r, c);
      for (size_t j = c; j < cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    ++r;
  }
  return r;
}

size_t rank(const IntMatrix& m) {
  RatMatrix q(m.rows(), m.cols());
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c) q.at(r, c) = Rat(m.at(r, c));
  return rank(std::move(q));
}

namespace {
void reach(const IntMatrix& m, size_t start, bool transpose, std::vector<bool>& seen) {
  std::vector<size_t> stack{start};
  seen.assign(m.rows(), false);
  seen[start] = true;
  while (!stack.empty()) {
    size_t u = stack.back();
    stack.pop_back();
    for (size_t v = 0; v < m.rows(); ++v) {
      const Int& e = transpose ? m.at(v, u) : m.at(u, v);
      if (e > 0 && !seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
}
}  // namespace

bool irreducible(const IntMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error("bad-matrix", "irreducibility needs a square matrix");
  std::vector<bool> fwd, bwd;
  reach(m, 0, false, fwd);
  reach(m, 0, true, bwd);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

bool all_positive(const IntMatrix& m) {
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c)
      if (m.at(r, c) <= 0) return false;
  return true;
}

}  // namespace adic
