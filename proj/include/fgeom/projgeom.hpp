#pragma once

// Points, subspaces, duality and collineations of PG(m, F).

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fgeom/linalg.hpp"

namespace fgeom::pg {

using gf::Field;
using gf::FieldElement;
using linalg::Matrix;
using linalg::Vec;

/// A point of PG(m, F), stored with its first nonzero coordinate equal to 1.
class ProjPoint {
 public:
  /// Normalizes `coords`; the zero vector is rejected.
  explicit ProjPoint(Vec coords);

  const Vec& coords() const { return coords_; }
  const FieldElement& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }
  const Field& field() const { return coords_.front().field(); }

  /// "(c0:c1:...)" with each coordinate as its coefficient list.
  std::string to_string() const;

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.coords_ == b.coords_; }
  friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b);

 private:
  Vec coords_;
};

/// The normalized representative of a nonzero vector.
Vec normalized(std::span<const FieldElement> v);

/// A projective subspace held as its reduced row-echelon basis, which makes
/// equality a plain comparison of entries.
class ProjSubspace {
 public:
  /// Subspace spanned by the rows of `generators` (any shape, any rank).
  ProjSubspace(const Field& field, std::size_t ambient_len, const Matrix& generators);

  static ProjSubspace empty(const Field& field, std::size_t ambient_len);
  static ProjSubspace whole(const Field& field, std::size_t ambient_len);
  static ProjSubspace of_point(const ProjPoint& p);
  static ProjSubspace of_vectors(const Field& field, std::size_t ambient_len, std::span<const Vec> vectors);

  const Field& field() const { return *field_; }
  const Matrix& basis() const { return basis_; }
  /// Projective dimension; -1 for the empty subspace.
  int dim() const { return static_cast<int>(basis_.rows()) - 1; }
  std::size_t ambient_len() const { return len_; }
  int ambient_dim() const { return static_cast<int>(len_) - 1; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const FieldElement> v) const;
  bool contains(const ProjPoint& p) const { return contains(p.coords()); }
  bool contains(const ProjSubspace& s) const;
  std::size_t point_count() const;

  std::string to_string() const;

  friend bool operator==(const ProjSubspace& a, const ProjSubspace& b) {
    return a.field_ == b.field_ && a.len_ == b.len_ && a.basis_ == b.basis_;
  }
  friend std::strong_ordering operator<=>(const ProjSubspace& a, const ProjSubspace& b);

 private:
  const Field* field_;
  std::size_t len_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

ProjSubspace span(std::span<const ProjPoint> points);
ProjSubspace span(std::span<const ProjSubspace> subspaces);
ProjSubspace span(const ProjSubspace& a, const ProjSubspace& b);
ProjSubspace span(const ProjPoint& a, const ProjPoint& b);
ProjSubspace meet(const ProjSubspace& a, const ProjSubspace& b);
/// Annihilator under the standard bilinear form x . y.
ProjSubspace dual(const ProjSubspace& s);

/// Visits the points of s in lexicographic order of their coordinates
/// relative to the RREF basis.
void for_each_point(const ProjSubspace& s, const std::function<void(const ProjPoint&)>& visit);
std::vector<ProjPoint> enumerate_points(const ProjSubspace& s);
std::vector<ProjPoint> all_points(const Field& field, std::size_t ambient_len);
/// Hyperplanes of PG(ambient_len - 1, F) as duals of the dual points.
std::vector<ProjSubspace> hyperplanes(const Field& field, std::size_t ambient_len);
/// All lines of PG(ambient_len - 1, F).
std::vector<ProjSubspace> lines(const Field& field, std::size_t ambient_len);

/// (|F|^d - 1) / (|F| - 1): the number of points of a d-dimensional vector
/// subspace.
std::uint64_t theta(std::uint64_t field_order, int vector_dim);

/// Random-access enumeration of the k-dimensional vector subspaces of F^len,
/// i.e. all rank-k RREF matrices, indexed 0..size()-1.
class SubspaceEnumerator {
 public:
  SubspaceEnumerator(const Field& field, std::size_t len, std::size_t k);

  std::uint64_t size() const { return total_; }
  Matrix at(std::uint64_t index) const;

 private:
  const Field* field_;
  std::size_t len_;
  std::size_t k_;
  std::vector<std::vector<std::size_t>> pivot_sets_;
  std::vector<std::uint64_t> offsets_;  // prefix sums of q^(free entries)
  std::uint64_t total_ = 0;
};

/// Semilinear map x -> A * (x^(p^j)) on column vectors; j == 0 is a
/// projectivity.
class Collineation {
 public:
  Collineation(Matrix matrix, std::uint32_t frobenius_exponent = 0);

  static Collineation identity(const Field& field, std::size_t n);

  const Matrix& matrix() const { return matrix_; }
  std::uint32_t frobenius_exponent() const { return frob_; }
  std::size_t size() const { return matrix_.rows(); }
  bool is_projectivity() const { return frob_ == 0; }

  Vec apply_vector(std::span<const FieldElement> v) const;
  /// (this o other)(x) = this(other(x))
  Collineation compose(const Collineation& other) const;
  Collineation inverse() const;

  friend bool operator==(const Collineation& a, const Collineation& b) {
    return a.frob_ == b.frob_ && a.matrix_ == b.matrix_;
  }

 private:
  Matrix matrix_;
  std::uint32_t frob_;
};

ProjPoint apply(const Collineation& c, const ProjPoint& p);
ProjSubspace apply(const Collineation& c, const ProjSubspace& s);
/// Two collineations acting identically on all points.
bool projectively_equal(const Collineation& a, const Collineation& b);

}  // namespace fgeom::pg

template <>
struct std::hash<fgeom::pg::ProjPoint> {
  std::size_t operator()(const fgeom::pg::ProjPoint& p) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto& c : p.coords()) h = (h ^ c.code()) * 1099511628211ull;
    return h;
  }
};
