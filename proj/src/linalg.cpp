#include "fgeom/linalg.hpp"

#include <algorithm>

namespace fgeom::linalg {

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols)
    : field_(&field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

Matrix Matrix::identity(const Field& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

Matrix Matrix::from_rows(const Field& field, std::span<const Vec> rows, std::size_t cols) {
  Matrix m(field, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error(ErrorCode::DimensionMismatch, "row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) {
      if (rows[i][j].field_ptr() != &field) throw Error(ErrorCode::MixedFields, "matrix entry from another field");
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

Matrix Matrix::from_columns(const Field& field, std::span<const Vec> cols, std::size_t rows) {
  return from_rows(field, cols, rows).transpose();
}

Vec Matrix::col_vec(std::size_t j) const {
  Vec v;
  v.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
  return v;
}

std::vector<Vec> Matrix::row_list() const {
  std::vector<Vec> out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vec(i));
  return out;
}

void Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + a * cols_, data_.begin() + (a + 1) * cols_, data_.begin() + b * cols_);
}

void Matrix::append_row(std::span<const FieldElement> r) {
  if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "row length mismatch");
  data_.insert(data_.end(), r.begin(), r.end());
  ++rows_;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  if (field_ != o.field_) throw Error(ErrorCode::MixedFields, "matrix product across fields");
  Matrix r(*field_, rows_, o.cols_);
  const Field& f = *field_;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint32_t a = (*this)(i, k).code();
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        r(i, j) = FieldElement(field_, f.add(r(i, j).code(), f.mul(a, o(k, j).code())));
      }
    }
  }
  return r;
}

Vec Matrix::operator*(std::span<const FieldElement> v) const {
  if (v.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  Vec out;
  out.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out.push_back(dot(row(i), v));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix t(*field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::vector<std::size_t> rref_in_place(Matrix& m) {
  const Field& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, r);
    const std::uint32_t inv = f.inv(m(r, c).code());
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = FieldElement(&f, f.mul(m(r, j).code(), inv));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const std::uint32_t factor = m(i, c).code();
      for (std::size_t j = c; j < m.cols(); ++j) {
        m(i, j) = FieldElement(&f, f.sub(m(i, j).code(), f.mul(factor, m(r, j).code())));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Matrix rref(Matrix m) {
  const auto pivots = rref_in_place(m);
  Matrix out(m.field(), 0, m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) out.append_row(m.row(i));
  return out;
}

std::size_t rank(Matrix m) { return rref_in_place(m).size(); }

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  const Field& f = m.field();
  Matrix aug(f, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = f.one();
  }
  const auto pivots = rref_in_place(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(f, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  }
  return inv;
}

Matrix kernel(const Matrix& m) {
  Matrix r = m;
  const auto pivots = rref_in_place(r);
  const Field& f = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  Matrix out(f, 0, m.cols());
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
    out.append_row(v);
  }
  return rref(out);
}

std::optional<Vec> solve(const Matrix& m, std::span<const FieldElement> b) {
  if (b.size() != m.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length mismatch");
  const Field& f = m.field();
  Matrix aug(f, m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto pivots = rref_in_place(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), f.zero());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug(i, m.cols());
  return x;
}

FieldElement dot(std::span<const FieldElement> a, std::span<const FieldElement> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "dot product length mismatch");
  if (a.empty()) throw Error(ErrorCode::DimensionMismatch, "dot product of empty vectors");
  const Field& f = a.front().field();
  std::uint32_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].field_ptr() != b[i].field_ptr()) throw Error(ErrorCode::MixedFields, "dot product across fields");
    acc = f.add(acc, f.mul(a[i].code(), b[i].code()));
  }
  return FieldElement(&f, acc);
}

Vec scale(const FieldElement& s, std::span<const FieldElement> v) {
  Vec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(s * x);
  return out;
}

Vec add(std::span<const FieldElement> a, std::span<const FieldElement> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector length mismatch");
  Vec out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

Vec sub(std::span<const FieldElement> a, std::span<const FieldElement> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector length mismatch");
  Vec out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

bool is_zero(std::span<const FieldElement> v) {
  return std::all_of(v.begin(), v.end(), [](const FieldElement& x) { return x.is_zero(); });
}

Vec frobenius(std::span<const FieldElement> v, std::uint32_t j) {
  Vec out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x.field_ptr(), x.field().frob(x.code(), j));
  return out;
}

Matrix frobenius(const Matrix& m, std::uint32_t j) {
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const auto& x = m(i, c);
      out(i, c) = FieldElement(x.field_ptr(), x.field().frob(x.code(), j));
    }
  }
  return out;
}

}  // namespace fgeom::linalg
