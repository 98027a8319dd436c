#include "fgeom/projgeom.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fgeom::pg {

namespace {

std::strong_ordering compare_codes(std::span<const FieldElement> a, std::span<const FieldElement> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i].code() <=> b[i].code(); c != 0) return c;
  }
  return a.size() <=> b.size();
}

void require_same_ambient(const ProjSubspace& a, const ProjSubspace& b) {
  if (&a.field() != &b.field() || a.ambient_len() != b.ambient_len()) {
    throw Error(ErrorCode::AmbientMismatch, "subspaces live in different projective spaces");
  }
}

}  // namespace

Vec normalized(std::span<const FieldElement> v) {
  auto it = std::find_if(v.begin(), v.end(), [](const FieldElement& x) { return !x.is_zero(); });
  if (it == v.end()) throw Error(ErrorCode::ParameterDomain, "the zero vector is not a projective point");
  const FieldElement inv = it->inverse();
  return linalg::scale(inv, v);
}

ProjPoint::ProjPoint(Vec coords) : coords_(normalized(coords)) {}

std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b) { return compare_codes(a.coords_, b.coords_); }

std::string ProjPoint::to_string() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) os << (i ? ":" : "") << coords_[i].to_string();
  os << ")";
  return os.str();
}

ProjSubspace::ProjSubspace(const Field& field, std::size_t ambient_len, const Matrix& generators)
    : field_(&field), len_(ambient_len), basis_(field, 0, ambient_len) {
  if (generators.cols() != ambient_len) throw Error(ErrorCode::DimensionMismatch, "generator length mismatch");
  if (&generators.field() != &field) throw Error(ErrorCode::MixedFields, "generators over another field");
  Matrix m = generators;
  pivots_ = linalg::rref_in_place(m);
  for (std::size_t i = 0; i < pivots_.size(); ++i) basis_.append_row(m.row(i));
}

ProjSubspace ProjSubspace::empty(const Field& field, std::size_t ambient_len) {
  return ProjSubspace(field, ambient_len, Matrix(field, 0, ambient_len));
}

ProjSubspace ProjSubspace::whole(const Field& field, std::size_t ambient_len) {
  return ProjSubspace(field, ambient_len, Matrix::identity(field, ambient_len));
}

ProjSubspace ProjSubspace::of_point(const ProjPoint& p) {
  std::vector<Vec> rows{p.coords()};
  return of_vectors(p.field(), p.size(), rows);
}

ProjSubspace ProjSubspace::of_vectors(const Field& field, std::size_t ambient_len, std::span<const Vec> vectors) {
  return ProjSubspace(field, ambient_len, Matrix::from_rows(field, vectors, ambient_len));
}

bool ProjSubspace::contains(std::span<const FieldElement> v) const {
  if (v.size() != len_) throw Error(ErrorCode::AmbientMismatch, "point has the wrong number of coordinates");
  const Field& f = *field_;
  std::vector<std::uint32_t> x(len_);
  for (std::size_t i = 0; i < len_; ++i) {
    if (v[i].field_ptr() != field_) throw Error(ErrorCode::AmbientMismatch, "point over another field");
    x[i] = v[i].code();
  }
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    const std::uint32_t c = x[pivots_[r]];
    if (c == 0) continue;
    for (std::size_t j = pivots_[r]; j < len_; ++j) x[j] = f.sub(x[j], f.mul(c, basis_(r, j).code()));
  }
  return std::all_of(x.begin(), x.end(), [](std::uint32_t c) { return c == 0; });
}

bool ProjSubspace::contains(const ProjSubspace& s) const {
  require_same_ambient(*this, s);
  for (std::size_t r = 0; r < s.basis_.rows(); ++r) {
    if (!contains(s.basis_.row(r))) return false;
  }
  return true;
}

std::size_t ProjSubspace::point_count() const { return theta(field_->order(), dim() + 1); }

std::string ProjSubspace::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < basis_.rows(); ++r) {
    os << (r ? "," : "") << "(";
    for (std::size_t j = 0; j < len_; ++j) os << (j ? ":" : "") << basis_(r, j).to_string();
    os << ")";
  }
  os << "]";
  return os.str();
}

std::strong_ordering operator<=>(const ProjSubspace& a, const ProjSubspace& b) {
  if (auto c = a.len_ <=> b.len_; c != 0) return c;
  if (auto c = a.basis_.rows() <=> b.basis_.rows(); c != 0) return c;
  for (std::size_t r = 0; r < a.basis_.rows(); ++r) {
    if (auto c = compare_codes(a.basis_.row(r), b.basis_.row(r)); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

ProjSubspace span(std::span<const ProjPoint> points) {
  if (points.empty()) throw Error(ErrorCode::AmbientMismatch, "span of nothing has no ambient space");
  const Field& f = points.front().field();
  const std::size_t len = points.front().size();
  Matrix m(f, 0, len);
  for (const auto& p : points) {
    if (&p.field() != &f || p.size() != len) throw Error(ErrorCode::AmbientMismatch, "points in different spaces");
    m.append_row(p.coords());
  }
  return ProjSubspace(f, len, m);
}

ProjSubspace span(std::span<const ProjSubspace> subspaces) {
  if (subspaces.empty()) throw Error(ErrorCode::AmbientMismatch, "span of nothing has no ambient space");
  const ProjSubspace& first = subspaces.front();
  Matrix m(first.field(), 0, first.ambient_len());
  for (const auto& s : subspaces) {
    require_same_ambient(first, s);
    for (std::size_t r = 0; r < s.basis().rows(); ++r) m.append_row(s.basis().row(r));
  }
  return ProjSubspace(first.field(), first.ambient_len(), m);
}

ProjSubspace span(const ProjSubspace& a, const ProjSubspace& b) {
  const ProjSubspace both[] = {a, b};
  return span(std::span<const ProjSubspace>(both));
}

ProjSubspace span(const ProjPoint& a, const ProjPoint& b) {
  const ProjPoint both[] = {a, b};
  return span(std::span<const ProjPoint>(both));
}

ProjSubspace dual(const ProjSubspace& s) {
  return ProjSubspace(s.field(), s.ambient_len(), linalg::kernel(s.basis()));
}

ProjSubspace meet(const ProjSubspace& a, const ProjSubspace& b) {
  require_same_ambient(a, b);
  return dual(span(dual(a), dual(b)));
}

void for_each_point(const ProjSubspace& s, const std::function<void(const ProjPoint&)>& visit) {
  const std::size_t k = s.basis().rows();
  if (k == 0) return;
  const Field& f = s.field();
  const std::uint32_t q = f.order();
  const std::size_t len = s.ambient_len();
  // coefficient vectors whose first nonzero entry is 1, in lexicographic order
  for (std::size_t lead = 0; lead < k; ++lead) {
    std::vector<std::uint32_t> tail(k - lead - 1, 0);
    while (true) {
      std::vector<std::uint32_t> acc(len, 0);
      for (std::size_t j = 0; j < len; ++j) acc[j] = s.basis()(lead, j).code();
      for (std::size_t t = 0; t < tail.size(); ++t) {
        if (tail[t] == 0) continue;
        const std::size_t row = lead + 1 + t;
        for (std::size_t j = 0; j < len; ++j) acc[j] = f.add(acc[j], f.mul(tail[t], s.basis()(row, j).code()));
      }
      Vec v;
      v.reserve(len);
      for (auto c : acc) v.emplace_back(&f, c);
      visit(ProjPoint(std::move(v)));
      std::size_t pos = tail.size();
      while (pos > 0) {
        if (++tail[pos - 1] < q) break;
        tail[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  }
}

std::vector<ProjPoint> enumerate_points(const ProjSubspace& s) {
  std::vector<ProjPoint> out;
  out.reserve(s.dim() >= 0 ? s.point_count() : 0);
  for_each_point(s, [&](const ProjPoint& p) { out.push_back(p); });
  return out;
}

std::vector<ProjPoint> all_points(const Field& field, std::size_t ambient_len) {
  return enumerate_points(ProjSubspace::whole(field, ambient_len));
}

std::vector<ProjSubspace> hyperplanes(const Field& field, std::size_t ambient_len) {
  std::vector<ProjSubspace> out;
  for (const auto& p : all_points(field, ambient_len)) out.push_back(dual(ProjSubspace::of_point(p)));
  return out;
}

std::vector<ProjSubspace> lines(const Field& field, std::size_t ambient_len) {
  SubspaceEnumerator e(field, ambient_len, 2);
  std::vector<ProjSubspace> out;
  out.reserve(e.size());
  for (std::uint64_t i = 0; i < e.size(); ++i) out.emplace_back(field, ambient_len, e.at(i));
  return out;
}

std::uint64_t theta(std::uint64_t field_order, int vector_dim) {
  std::uint64_t total = 0;
  std::uint64_t pw = 1;
  for (int i = 0; i < vector_dim; ++i) {
    total += pw;
    pw *= field_order;
  }
  return total;
}

SubspaceEnumerator::SubspaceEnumerator(const Field& field, std::size_t len, std::size_t k)
    : field_(&field), len_(len), k_(k) {
  if (k > len) return;
  std::vector<std::size_t> comb(k);
  std::iota(comb.begin(), comb.end(), 0);
  const std::uint64_t q = field.order();
  while (true) {
    // free entries: row i has zeros before its pivot and at later pivots
    std::size_t free = 0;
    for (std::size_t i = 0; i < k; ++i) free += (len - comb[i] - 1) - (k - i - 1);
    std::uint64_t cnt = 1;
    for (std::size_t t = 0; t < free; ++t) cnt *= q;
    pivot_sets_.push_back(comb);
    offsets_.push_back(total_);
    total_ += cnt;
    // next combination
    std::size_t i = k;
    while (i > 0 && comb[i - 1] == len - k + i - 1) --i;
    if (i == 0) break;
    ++comb[i - 1];
    for (std::size_t j = i; j < k; ++j) comb[j] = comb[j - 1] + 1;
  }
}

Matrix SubspaceEnumerator::at(std::uint64_t index) const {
  if (index >= total_) throw Error(ErrorCode::ParameterDomain, "subspace index out of range");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), index);
  const std::size_t which = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  std::uint64_t fill = index - offsets_[which];
  const auto& piv = pivot_sets_[which];
  const Field& f = *field_;
  const std::uint64_t q = f.order();
  Matrix m(f, k_, len_);
  std::vector<bool> is_pivot(len_, false);
  for (auto c : piv) is_pivot[c] = true;
  for (std::size_t i = 0; i < k_; ++i) {
    m(i, piv[i]) = f.one();
    for (std::size_t j = piv[i] + 1; j < len_; ++j) {
      if (is_pivot[j]) continue;
      m(i, j) = f.element(static_cast<std::uint32_t>(fill % q));
      fill /= q;
    }
  }
  return m;
}

Collineation::Collineation(Matrix matrix, std::uint32_t frobenius_exponent)
    : matrix_(std::move(matrix)), frob_(frobenius_exponent % matrix_.field().degree()) {
  if (matrix_.rows() != matrix_.cols()) throw Error(ErrorCode::DimensionMismatch, "collineation matrix must be square");
  if (!linalg::inverse(matrix_)) throw Error(ErrorCode::ParameterDomain, "collineation matrix is singular");
}

Collineation Collineation::identity(const Field& field, std::size_t n) { return Collineation(Matrix::identity(field, n), 0); }

Vec Collineation::apply_vector(std::span<const FieldElement> v) const {
  if (v.size() != matrix_.cols()) throw Error(ErrorCode::DimensionMismatch, "collineation size mismatch");
  const Vec fv = linalg::frobenius(v, frob_);
  return matrix_ * std::span<const FieldElement>(fv);
}

Collineation Collineation::compose(const Collineation& other) const {
  if (other.size() != size()) throw Error(ErrorCode::DimensionMismatch, "collineation size mismatch");
  // A s^j (B s^k x) = A s^j(B) s^(j+k) x
  return Collineation(matrix_ * linalg::frobenius(other.matrix_, frob_), frob_ + other.frob_);
}

Collineation Collineation::inverse() const {
  const std::uint32_t k = matrix_.field().degree();
  const std::uint32_t back = (k - frob_) % k;
  // x = A s^j y  =>  y = s^-j(A^-1) s^-j x
  return Collineation(linalg::frobenius(*linalg::inverse(matrix_), back), back);
}

ProjPoint apply(const Collineation& c, const ProjPoint& p) { return ProjPoint(c.apply_vector(p.coords())); }

ProjSubspace apply(const Collineation& c, const ProjSubspace& s) {
  if (s.ambient_len() != c.size()) throw Error(ErrorCode::DimensionMismatch, "collineation size mismatch");
  Matrix img(s.field(), 0, s.ambient_len());
  for (std::size_t r = 0; r < s.basis().rows(); ++r) img.append_row(c.apply_vector(s.basis().row(r)));
  return ProjSubspace(s.field(), s.ambient_len(), img);
}

bool projectively_equal(const Collineation& a, const Collineation& b) {
  if (a.size() != b.size() || a.frobenius_exponent() != b.frobenius_exponent()) return false;
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  std::optional<FieldElement> ratio;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (x(i, j).is_zero() != y(i, j).is_zero()) return false;
      if (x(i, j).is_zero()) continue;
      const FieldElement r = x(i, j) / y(i, j);
      if (!ratio) ratio = r;
      if (*ratio != r) return false;
    }
  }
  return true;
}

}  // namespace fgeom::pg
