#include "fgeom/fieldred.hpp"

#include <algorithm>

namespace fgeom::fieldred {

ReductionContext::ReductionContext(TowerRef tower, std::size_t r) : tower_(std::move(tower)), r_(r) {
  if (r_ == 0) throw Error(ErrorCode::ParameterDomain, "r must be positive");
}

Vec ReductionContext::expand(std::span<const FieldElement> v) const {
  if (v.size() != r_) throw Error(ErrorCode::DimensionMismatch, "expected a vector of length r");
  Vec out;
  out.reserve(reduced_len());
  for (const auto& x : v) {
    const Vec e = tower_->expand(x);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

Vec ReductionContext::contract(std::span<const FieldElement> y) const {
  if (y.size() != reduced_len()) throw Error(ErrorCode::DimensionMismatch, "expected a vector of length rn");
  const std::size_t n = tower_->n();
  Vec out;
  out.reserve(r_);
  for (std::size_t i = 0; i < r_; ++i) out.push_back(tower_->combine(y.subspan(i * n, n)));
  return out;
}

SpreadElement field_reduce_point(const ReductionContext& ctx, const ProjPoint& x) {
  if (x.size() != ctx.r() || &x.field() != &ctx.ext()) throw Error(ErrorCode::AmbientMismatch, "point is not in PG(r-1, q^n)");
  Matrix gens(ctx.base(), 0, ctx.reduced_len());
  for (const auto& a : ctx.tower().basis()) gens.append_row(ctx.expand(linalg::scale(a, x.coords())));
  return {ProjSubspace(ctx.base(), ctx.reduced_len(), gens), x};
}

std::vector<SpreadElement> desarguesian_spread(const ReductionContext& ctx) {
  std::vector<SpreadElement> out;
  for (const auto& p : pg::all_points(ctx.ext(), ctx.r())) out.push_back(field_reduce_point(ctx, p));
  return out;
}

std::vector<ProjPoint> b_operator(const ReductionContext& ctx, std::span<const ProjPoint> t) {
  std::vector<ProjPoint> out;
  out.reserve(t.size());
  for (const auto& y : t) out.push_back(ctx.contract_point(y));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ProjPoint> b_operator(const ReductionContext& ctx, const ProjSubspace& t) {
  const auto pts = pg::enumerate_points(t);
  return b_operator(ctx, pts);
}

std::optional<int> LinearSet::weight(const ProjPoint& x) const {
  auto it = std::lower_bound(points.begin(), points.end(), x);
  if (it == points.end() || *it != x) return std::nullopt;
  return weights[static_cast<std::size_t>(it - points.begin())];
}

LinearSet linear_set(const ReductionContext& ctx, const ProjSubspace& u) {
  if (u.dim() < 0) throw Error(ErrorCode::ZeroSubspace, "linear set of the zero subspace");
  if (&u.field() != &ctx.base() || u.ambient_len() != ctx.reduced_len()) {
    throw Error(ErrorCode::AmbientMismatch, "subspace is not in PG(rn-1, q)");
  }
  std::map<ProjPoint, std::uint64_t> counts;
  pg::for_each_point(u, [&](const ProjPoint& y) { ++counts[ctx.contract_point(y)]; });
  LinearSet ls{u, u.dim() + 1, {}, {}};
  for (const auto& [pt, c] : counts) {
    int w = 0;
    while (pg::theta(ctx.q(), w) < c) ++w;
    if (pg::theta(ctx.q(), w) != c) throw std::logic_error("point preimage count is not a theta value");
    ls.points.push_back(pt);
    ls.weights.push_back(w);
  }
  return ls;
}

ProjSubspace reduced_span(const ReductionContext& ctx, std::span<const Vec> vectors) {
  Matrix m(ctx.base(), 0, ctx.reduced_len());
  for (const auto& v : vectors) m.append_row(ctx.expand(v));
  return ProjSubspace(ctx.base(), ctx.reduced_len(), m);
}

LinearSet linear_set_of_span(const ReductionContext& ctx, std::span<const Vec> vectors) {
  return linear_set(ctx, reduced_span(ctx, vectors));
}

std::vector<Vec> contracted_basis(const ReductionContext& ctx, const ProjSubspace& u) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < u.basis().rows(); ++i) out.push_back(ctx.contract(u.basis().row(i)));
  return out;
}

Classification classify_linear_set(const LinearSet& l) {
  Classification c{LinearSetKind::Other, std::nullopt, l.weights};
  std::sort(c.profile.rbegin(), c.profile.rend());
  const bool all_one = std::all_of(l.weights.begin(), l.weights.end(), [](int w) { return w == 1; });
  if (l.rank == 2 && all_one) {
    c.kind = LinearSetKind::Subline;
  } else if (all_one) {
    c.kind = LinearSetKind::Scattered;
  } else if (l.rank >= 3 && c.profile.front() == l.rank - 1 &&
             std::count(l.weights.begin(), l.weights.end(), l.rank - 1) == 1 &&
             std::all_of(c.profile.begin() + 1, c.profile.end(), [](int w) { return w == 1; })) {
    c.kind = LinearSetKind::Club;
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      if (l.weights[i] == l.rank - 1) c.head = l.points[i];
    }
  }
  return c;
}

std::string to_string(LinearSetKind k) {
  switch (k) {
    case LinearSetKind::Scattered: return "scattered";
    case LinearSetKind::Club: return "club";
    case LinearSetKind::Subline: return "subline";
    case LinearSetKind::Other: return "other";
  }
  return "other";
}

}  // namespace fgeom::fieldred
