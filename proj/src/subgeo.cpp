#include "fgeom/subgeo.hpp"

#include <algorithm>

namespace fgeom::subgeo {

Subgeometry::Subgeometry(TowerRef tower, Matrix basis)
    : tower_(std::move(tower)), basis_(std::move(basis)), cache_(std::make_shared<Cache>()) {
  if (&basis_.field() != tower_->ext().get()) throw Error(ErrorCode::MixedFields, "basis must be over GF(q^n)");
  if (basis_.rows() != basis_.cols() || basis_.rows() < 2) {
    throw Error(ErrorCode::DimensionMismatch, "subgeometry basis must be square of size at least 2");
  }
  if (!linalg::inverse(basis_)) throw Error(ErrorCode::DegenerateFrame, "subgeometry basis is singular");
}

Vec Subgeometry::combine(std::span<const gf::FieldElement> lambda) const {
  const gf::Field& f = field();
  Vec acc(rank(), f.zero());
  for (std::size_t i = 0; i < rank(); ++i) {
    if (lambda[i].is_zero()) continue;
    const gf::FieldElement l = tower_->lift(lambda[i]);
    for (std::size_t j = 0; j < rank(); ++j) acc[j] += l * basis_(i, j);
  }
  return acc;
}

const std::vector<ProjPoint>& Subgeometry::points() const {
  std::call_once(cache_->points_once, [this] {
    std::vector<ProjPoint> out;
    pg::for_each_point(ProjSubspace::whole(*tower_->base(), rank()),
                       [&](const ProjPoint& lambda) { out.emplace_back(combine(lambda.coords())); });
    std::sort(out.begin(), out.end());
    cache_->points = std::move(out);
  });
  return cache_->points;
}

const std::vector<SubHyperplane>& Subgeometry::hyperplanes() const {
  std::call_once(cache_->hyperplanes_once, [this] {
    const Matrix inv = *linalg::inverse(basis_);
    const auto& pts = points();
    std::vector<SubHyperplane> out;
    pg::for_each_point(ProjSubspace::whole(*tower_->base(), rank()), [&](const ProjPoint& c) {
      Vec lifted;
      for (const auto& x : c.coords()) lifted.push_back(tower_->lift(x));
      Vec normal = inv * std::span<const gf::FieldElement>(lifted);
      Matrix nm = Matrix::from_rows(field(), std::span<const Vec>(&normal, 1), rank());
      ProjSubspace ext(field(), rank(), linalg::kernel(nm));
      std::vector<ProjPoint> on;
      for (const auto& p : pts) {
        if (linalg::dot(normal, p.coords()).is_zero()) on.push_back(p);
      }
      out.push_back(SubHyperplane{c.coords(), std::move(normal), std::move(ext), std::move(on)});
    });
    cache_->hyperplanes = std::move(out);
  });
  return cache_->hyperplanes;
}

bool Subgeometry::contains(const ProjPoint& p) const {
  const auto& pts = points();
  return std::binary_search(pts.begin(), pts.end(), p);
}

bool operator==(const Subgeometry& a, const Subgeometry& b) {
  return a.tower_ == b.tower_ && a.rank() == b.rank() && a.points() == b.points();
}

Subgeometry canonical_subgeometry(TowerRef tower, std::size_t r) {
  if (tower->n() < 2) throw Error(ErrorCode::ParameterDomain, "a proper subgeometry needs n > 1");
  const gf::Field& f = *tower->ext();
  return Subgeometry(tower, Matrix::identity(f, r));
}

Subgeometry subgeometry_from_frame(TowerRef tower, std::span<const ProjPoint> frame) {
  if (frame.size() < 3) throw Error(ErrorCode::DegenerateFrame, "a frame needs r + 1 >= 3 points");
  const std::size_t r = frame.size() - 1;
  const gf::Field& f = *tower->ext();
  for (const auto& p : frame) {
    if (p.size() != r || &p.field() != &f) throw Error(ErrorCode::AmbientMismatch, "frame point has the wrong shape");
  }
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < r; ++i) pts.push_back(frame[i].coords());
  // unit point = sum c_i p_i with every c_i nonzero; this is equivalent to every
  // r-subset of the frame being independent
  const Matrix cols = Matrix::from_columns(f, pts, r);
  auto c = linalg::solve(cols, frame[r].coords());
  if (linalg::rank(cols) < r || !c) throw Error(ErrorCode::DegenerateFrame, "the first r frame points are dependent");
  Matrix basis(f, r, r);
  for (std::size_t i = 0; i < r; ++i) {
    if ((*c)[i].is_zero()) throw Error(ErrorCode::DegenerateFrame, "frame has a dependent r-subset");
    for (std::size_t j = 0; j < r; ++j) basis(i, j) = (*c)[i] * pts[i][j];
  }
  return Subgeometry(tower, basis);
}

const std::vector<SubHyperplane>& sub_hyperplanes(const Subgeometry& s) { return s.hyperplanes(); }

Subgeometry apply(const pg::Collineation& c, const Subgeometry& s) {
  Matrix img(s.field(), 0, s.rank());
  for (std::size_t i = 0; i < s.rank(); ++i) img.append_row(c.apply_vector(s.basis().row(i)));
  return Subgeometry(s.tower_ref(), img);
}

bool in_extended_hyperplane(const Subgeometry& s, const ProjSubspace& line) {
  for (const auto& h : s.hyperplanes()) {
    if (h.extension.contains(line)) return true;
  }
  return false;
}

LinePosition line_position(const Subgeometry& s, const ProjSubspace& line) {
  if (line.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a line");
  if (line.ambient_len() != s.rank() || &line.field() != &s.field()) {
    throw Error(ErrorCode::AmbientMismatch, "line and subgeometry live in different spaces");
  }
  if (in_extended_hyperplane(s, line)) {
    throw Error(ErrorCode::LineInExtendedHyperplane, "line " + line.to_string() + " lies in an extended hyperplane");
  }
  std::vector<ProjPoint> common;
  for (const auto& p : s.points()) {
    if (line.contains(p)) common.push_back(p);
  }
  if (common.empty()) return {LineKind::External, std::nullopt, {}};
  if (common.size() == 1) return {LineKind::Tangent, common.front(), {}};
  return {LineKind::Secant, std::nullopt, std::move(common)};
}

std::vector<ProjSubspace> admissible_lines(const Subgeometry& s) {
  std::vector<ProjSubspace> out;
  for (auto& l : pg::lines(s.field(), s.rank())) {
    if (!in_extended_hyperplane(s, l)) out.push_back(std::move(l));
  }
  return out;
}

}  // namespace fgeom::subgeo
