#pragma once

// Dense linear algebra over a finite field: row reduction, rank, kernels,
// inverses and linear solves. Shared by every geometric module.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fgeom/gf.hpp"

namespace fgeom::linalg {

using gf::Field;
using gf::FieldElement;
using Vec = std::vector<FieldElement>;

class Matrix {
 public:
  Matrix(const Field& field, std::size_t rows, std::size_t cols);

  static Matrix identity(const Field& field, std::size_t n);
  /// Rows must all have length `cols`.
  static Matrix from_rows(const Field& field, std::span<const Vec> rows, std::size_t cols);
  static Matrix from_columns(const Field& field, std::span<const Vec> cols, std::size_t rows);

  const Field& field() const { return *field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  FieldElement& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const FieldElement& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const FieldElement> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec row_vec(std::size_t i) const { return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_}; }
  Vec col_vec(std::size_t j) const;
  std::vector<Vec> row_list() const;

  void swap_rows(std::size_t a, std::size_t b);
  void append_row(std::span<const FieldElement> r);

  Matrix operator*(const Matrix& o) const;
  /// Matrix times column vector.
  Vec operator*(std::span<const FieldElement> v) const;
  Matrix transpose() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  const Field* field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<FieldElement> data_;
};

/// Reduced row-echelon form in place; leading entries are 1 and zero rows
/// are moved to the bottom. Returns the pivot columns.
std::vector<std::size_t> rref_in_place(Matrix& m);
/// RREF with zero rows dropped.
Matrix rref(Matrix m);
std::size_t rank(Matrix m);
std::optional<Matrix> inverse(const Matrix& m);
/// Basis (as rows, in RREF) of {x : m x = 0}.
Matrix kernel(const Matrix& m);
/// Some x with m x = b, if one exists.
std::optional<Vec> solve(const Matrix& m, std::span<const FieldElement> b);

FieldElement dot(std::span<const FieldElement> a, std::span<const FieldElement> b);
Vec scale(const FieldElement& s, std::span<const FieldElement> v);
Vec add(std::span<const FieldElement> a, std::span<const FieldElement> b);
Vec sub(std::span<const FieldElement> a, std::span<const FieldElement> b);
bool is_zero(std::span<const FieldElement> v);
/// Entrywise x -> x^(p^j).
Vec frobenius(std::span<const FieldElement> v, std::uint32_t j);
Matrix frobenius(const Matrix& m, std::uint32_t j);

}  // namespace fgeom::linalg
