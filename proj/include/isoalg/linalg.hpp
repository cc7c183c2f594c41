#ifndef ISOALG_LINALG_HPP
#define ISOALG_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "isoalg/error.hpp"
#include "isoalg/scalars.hpp"

namespace isoalg {

/// Sparse vector as (index, coefficient) pairs, strictly increasing index,
/// no zero coefficients.
using SparseVector = std::vector<std::pair<std::size_t, FieldElement>>;

inline SparseVector to_sparse(const std::vector<FieldElement>& dense) {
  SparseVector out;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (!dense[i].is_zero()) out.emplace_back(i, dense[i]);
  }
  return out;
}

inline std::vector<FieldElement> to_dense(const SparseVector& v, const Field& field, std::size_t dim) {
  std::vector<FieldElement> out(dim, field.zero());
  for (const auto& [i, c] : v) out[i] = c;
  return out;
}

/// Returns a + scale * b.
inline SparseVector axpy(const SparseVector& a, const FieldElement& scale, const SparseVector& b) {
  if (scale.is_zero()) return a;
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, scale * b[j].second);
      ++j;
    } else {
      FieldElement c = a[i].second + scale * b[j].second;
      if (!c.is_zero()) out.emplace_back(a[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  return out;
}

inline FieldElement coefficient_at(const SparseVector& v, std::size_t index, const Field& field) {
  auto it = std::lower_bound(v.begin(), v.end(), index,
                             [](const auto& entry, std::size_t k) { return entry.first < k; });
  if (it != v.end() && it->first == index) return it->second;
  return field.zero();
}

/// Subspace kept in reduced row-echelon form under incremental insertion.
/// Rows are ordered by pivot column; every row is monic at its pivot and
/// zero at every other pivot.
class RowSpace {
 public:
  RowSpace(Field field, std::size_t dim) : field_(std::move(field)), dim_(dim) {}

  const Field& field() const { return field_; }
  std::size_t ambient_dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVector>& rows() const { return rows_; }

  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r.front().first);
    return out;
  }

  /// Remainder of v after eliminating every pivot coordinate.
  SparseVector reduce(SparseVector v) const {
    for (const auto& row : rows_) {
      const std::size_t p = row.front().first;
      FieldElement c = coefficient_at(v, p, field_);
      if (!c.is_zero()) v = axpy(v, -c, row);
    }
    return v;
  }

  bool contains(const SparseVector& v) const { return reduce(v).empty(); }

  /// Adds v to the span. Returns the new normalized row, or nullopt if v was
  /// already in the span.
  std::optional<SparseVector> insert(SparseVector v) {
    v = reduce(std::move(v));
    if (v.empty()) return std::nullopt;
    const FieldElement lead_inv = v.front().second.inverse();
    for (auto& [i, c] : v) c = c * lead_inv;
    const std::size_t p = v.front().first;
    for (auto& row : rows_) {
      FieldElement c = coefficient_at(row, p, field_);
      if (!c.is_zero()) row = axpy(row, -c, v);
    }
    auto pos = std::lower_bound(rows_.begin(), rows_.end(), p,
                                [](const SparseVector& r, std::size_t col) { return r.front().first < col; });
    rows_.insert(pos, v);
    return v;
  }

 private:
  Field field_;
  std::size_t dim_;
  std::vector<SparseVector> rows_;
};

/// Dense matrix over a single field.
class Matrix {
 public:
  Matrix(Field field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix identity(const Field& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  static Matrix from_rows(const Field& field, const std::vector<std::vector<FieldElement>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged matrix rows");
      for (std::size_t c = 0; c < cols; ++c) {
        if (rows[r][c].field() != field) throw Error(ErrorKind::DescriptorMismatch, "matrix entry over wrong field");
        m(r, c) = rows[r][c];
      }
    }
    return m;
  }

  const Field& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  FieldElement& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const FieldElement& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<FieldElement> row(std::size_t r) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
  }

  std::vector<std::vector<FieldElement>> to_rows() const {
    std::vector<std::vector<FieldElement>> out;
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
  }

  Matrix transposed() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    }
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
    if (a.field_ != b.field_) throw Error(ErrorKind::FieldMismatch, "matrix product over different fields");
    Matrix out(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const FieldElement& x = a(i, k);
        if (x.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (!b(k, j).is_zero()) out(i, j) += x * b(k, j);
        }
      }
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<FieldElement> data_;
};

struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivot_columns;
};

/// Gauss-Jordan elimination. Columns are scanned left to right and the pivot
/// is the lowest-index remaining row with a nonzero entry in that column.
inline RowEchelon row_reduce(Matrix m) {
  std::vector<std::size_t> pivots;
  std::size_t next_row = 0;
  for (std::size_t col = 0; col < m.cols() && next_row < m.rows(); ++col) {
    std::size_t pivot = next_row;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != next_row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(next_row, c));
    }
    const FieldElement inv = m(next_row, col).inverse();
    for (std::size_t c = col; c < m.cols(); ++c) m(next_row, c) = m(next_row, c) * inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == next_row || m(r, col).is_zero()) continue;
      const FieldElement factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        if (!m(next_row, c).is_zero()) m(r, c) -= factor * m(next_row, c);
      }
    }
    pivots.push_back(col);
    ++next_row;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Matrix& m) { return row_reduce(m).pivot_columns.size(); }

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix aug(m.field(), n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = m.field().one();
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (e.pivot_columns.size() < n || e.pivot_columns[n - 1] != n - 1) return std::nullopt;
  Matrix inv(m.field(), n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  }
  return inv;
}

/// Solution set of a x = b: a particular solution (free variables set to
/// zero) and the nullity, or nullopt if the system is inconsistent.
struct LinearSolution {
  std::vector<FieldElement> particular;
  std::size_t nullity = 0;
};

inline std::optional<LinearSolution> solve(const Matrix& a, const std::vector<FieldElement>& b) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "right-hand side length");
  Matrix aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) aug(r, c) = a(r, c);
    aug(r, a.cols()) = b[r];
  }
  RowEchelon e = row_reduce(std::move(aug));
  if (!e.pivot_columns.empty() && e.pivot_columns.back() == a.cols()) return std::nullopt;
  LinearSolution sol{std::vector<FieldElement>(a.cols(), a.field().zero()), a.cols() - e.pivot_columns.size()};
  for (std::size_t r = 0; r < e.pivot_columns.size(); ++r) {
    sol.particular[e.pivot_columns[r]] = e.reduced(r, a.cols());
  }
  return sol;
}

}  // namespace isoalg

#endif  // ISOALG_LINALG_HPP
