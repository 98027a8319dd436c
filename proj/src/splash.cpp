#include "fgeom/splash.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <thread>

#include <boost/multiprecision/cpp_int.hpp>

namespace fgeom::splash {

namespace mp = boost::multiprecision;

std::string to_string(SplashKind k) {
  switch (k) {
    case SplashKind::Tangent: return "tangent";
    case SplashKind::External: return "external";
    case SplashKind::Secant: return "secant";
  }
  return "external";
}

LineFrame::LineFrame(Vec a, Vec b) : a_(std::move(a)), b_(std::move(b)), cols_(a_.front().field(), 0, 0) {
  if (a_.size() != b_.size() || a_.empty()) throw Error(ErrorCode::DimensionMismatch, "frame vectors differ in length");
  const Vec both[] = {a_, b_};
  cols_ = Matrix::from_columns(a_.front().field(), both, a_.size());
  if (linalg::rank(cols_) != 2) throw Error(ErrorCode::DegenerateLinearSet, "frame vectors are dependent");
}

LineFrame LineFrame::of_line(const ProjSubspace& line) {
  if (line.dim() != 1) throw Error(ErrorCode::DimensionMismatch, "expected a line");
  return LineFrame(line.basis().row_vec(0), line.basis().row_vec(1));
}

ProjSubspace LineFrame::line() const {
  const Vec both[] = {a_, b_};
  return ProjSubspace::of_vectors(a_.front().field(), a_.size(), both);
}

Vec LineFrame::to_ambient(std::span<const FieldElement> coords) const {
  if (coords.size() != 2) throw Error(ErrorCode::DimensionMismatch, "line coordinates have two entries");
  return linalg::add(linalg::scale(coords[0], a_), linalg::scale(coords[1], b_));
}

Vec LineFrame::to_line(std::span<const FieldElement> v) const {
  auto x = linalg::solve(cols_, v);
  if (!x) throw Error(ErrorCode::NotCollinear, "vector is not on the frame's line");
  return *x;
}

bool Splash::contains(const ProjPoint& p) const { return std::binary_search(points.begin(), points.end(), p); }

std::optional<int> Splash::hyperplane_count(const ProjPoint& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || *it != p || hyperplane_counts.empty()) return std::nullopt;
  return hyperplane_counts[static_cast<std::size_t>(it - points.begin())];
}

Splash compute_splash(const subgeo::Subgeometry& pi0, const ProjSubspace& line) {
  const subgeo::LinePosition pos = subgeo::line_position(pi0, line);
  const Vec a = line.basis().row_vec(0);
  const Vec b = line.basis().row_vec(1);
  std::map<ProjPoint, int> counts;
  for (const auto& h : pi0.hyperplanes()) {
    const FieldElement na = linalg::dot(h.normal, a);
    const FieldElement nb = linalg::dot(h.normal, b);
    Vec meet = linalg::sub(linalg::scale(nb, a), linalg::scale(na, b));
    if (linalg::is_zero(meet)) throw Error(ErrorCode::LineInExtendedHyperplane, "line lies in an extended hyperplane");
    ++counts[ProjPoint(std::move(meet))];
  }
  Splash s{line, {}, {}, SplashKind::External, std::nullopt, static_cast<int>(pi0.rank()), pi0, std::nullopt, std::nullopt};
  for (auto& [p, c] : counts) {
    s.points.push_back(p);
    s.hyperplane_counts.push_back(c);
  }
  switch (pos.kind) {
    case subgeo::LineKind::Tangent:
      s.kind = SplashKind::Tangent;
      s.centre = pos.centre;
      break;
    case subgeo::LineKind::Secant: s.kind = SplashKind::Secant; break;
    case subgeo::LineKind::External: s.kind = SplashKind::External; break;
  }
  return s;
}

Splash in_frame(const Splash& s, const LineFrame& frame) {
  Splash out = s;
  const gf::Field& f = s.line.field();
  out.line = ProjSubspace::whole(f, 2);
  std::vector<std::pair<ProjPoint, int>> mapped;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    mapped.emplace_back(frame.to_line(s.points[i]), s.hyperplane_counts.empty() ? 0 : s.hyperplane_counts[i]);
  }
  std::sort(mapped.begin(), mapped.end());
  out.points.clear();
  out.hyperplane_counts.clear();
  for (auto& [p, c] : mapped) {
    out.points.push_back(p);
    if (!s.hyperplane_counts.empty()) out.hyperplane_counts.push_back(c);
  }
  if (s.centre) out.centre = frame.to_line(*s.centre);
  out.origin_frame = frame;
  return out;
}

Subline subline_through(const gf::Tower& tower, const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3) {
  if (p1 == p2 || p1 == p3 || p2 == p3) throw Error(ErrorCode::NotDistinct, "subline needs three distinct points");
  const gf::Field& f = p1.field();
  if (&f != tower.ext().get()) throw Error(ErrorCode::MixedFields, "points are not over the tower's extension field");
  const std::size_t len = p1.size();
  if (p2.size() != len || p3.size() != len) throw Error(ErrorCode::AmbientMismatch, "points in different spaces");
  const Vec both[] = {p1.coords(), p2.coords()};
  const Matrix cols = Matrix::from_columns(f, both, len);
  auto ab = linalg::solve(cols, p3.coords());
  if (!ab) throw Error(ErrorCode::NotCollinear, "points are not collinear");
  const Vec t = linalg::scale((*ab)[0], p1.coords());
  const Vec v = linalg::scale((*ab)[1], p2.coords());
  std::vector<ProjPoint> pts{ProjPoint(t)};
  for (const auto& lam : tower.base()->elements()) {
    pts.emplace_back(linalg::add(v, linalg::scale(tower.lift(lam), t)));
  }
  std::sort(pts.begin(), pts.end());
  const fieldred::ReductionContext ctx(gf::Tower::over(tower.ext(), tower.q()), len);
  const Vec tv[] = {t, v};
  return Subline{{p1, p2, p3}, std::move(pts), fieldred::reduced_span(ctx, tv)};
}

bool closure_test(const gf::Tower& tower, const ProjPoint& t, std::span<const ProjPoint> a) {
  std::vector<ProjPoint> all(a.begin(), a.end());
  all.push_back(t);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      for (const auto& x : subline_through(tower, t, a[i], a[j]).points) {
        if (!std::binary_search(all.begin(), all.end(), x)) return false;
      }
    }
  }
  return true;
}

std::optional<std::vector<ProjPoint>> subline_closure(const gf::Tower& tower, const ProjPoint& t,
                                                      std::vector<ProjPoint> start, std::size_t limit) {
  std::set<ProjPoint> members(start.begin(), start.end());
  members.insert(t);
  if (members.size() > limit) return std::nullopt;
  std::vector<ProjPoint> processed;
  std::deque<ProjPoint> pending;
  for (const auto& p : members) {
    if (p != t) pending.push_back(p);
  }
  while (!pending.empty()) {
    const ProjPoint x = pending.front();
    pending.pop_front();
    for (const auto& y : processed) {
      for (const auto& z : subline_through(tower, t, x, y).points) {
        if (members.insert(z).second) {
          if (members.size() > limit) return std::nullopt;
          pending.push_back(z);
        }
      }
    }
    processed.push_back(x);
  }
  return std::vector<ProjPoint>(members.begin(), members.end());
}

std::vector<std::vector<ProjPoint>> enumerate_closed_sets(const gf::Tower& tower, const ProjPoint& t, std::size_t limit) {
  const auto universe = pg::all_points(*tower.ext(), 2);
  std::set<std::vector<ProjPoint>> seen;
  std::deque<std::vector<ProjPoint>> queue;
  if (auto c = subline_closure(tower, t, {t}, limit)) {
    seen.insert(*c);
    queue.push_back(*c);
  }
  while (!queue.empty()) {
    const auto cur = queue.front();
    queue.pop_front();
    for (const auto& x : universe) {
      if (std::binary_search(cur.begin(), cur.end(), x)) continue;
      auto grown = cur;
      grown.push_back(x);
      auto c = subline_closure(tower, t, std::move(grown), limit);
      if (c && seen.insert(*c).second) queue.push_back(*c);
    }
  }
  return {seen.begin(), seen.end()};
}

LinearRepresentation splash_to_linear_subspace(const Splash& s) {
  if (!s.origin) throw Error(ErrorCode::ParameterDomain, "splash has no defining subgeometry");
  const subgeo::Subgeometry& pi0 = *s.origin;
  const LineFrame frame = s.origin_frame ? *s.origin_frame : LineFrame::of_line(s.line);
  const fieldred::ReductionContext ctx(pi0.tower_ref(), 2);
  const Matrix inv = *linalg::inverse(pi0.basis());
  // normals B^-1 e_i form a GF(q)-basis of the dual subgeometry's vector space;
  // n -> (n . b, -n . a) sends a normal to the coordinates of its meet with the line
  std::vector<Vec> images;
  for (std::size_t i = 0; i < pi0.rank(); ++i) {
    const Vec n = inv.col_vec(i);
    images.push_back({linalg::dot(n, frame.b()), -linalg::dot(n, frame.a())});
  }
  LinearRepresentation rep{frame, fieldred::linear_set_of_span(ctx, images)};

  const Splash coords = s.origin_frame ? s : in_frame(s, frame);
  if (rep.set.rank != static_cast<int>(pi0.rank()) || rep.set.points != coords.points) {
    throw std::logic_error("projected dual basis does not reproduce the splash");
  }
  for (std::size_t i = 0; i < coords.points.size(); ++i) {
    if (pg::theta(ctx.q(), rep.set.weights[i]) != static_cast<std::uint64_t>(coords.hyperplane_counts[i])) {
      throw std::logic_error("weight does not match hyperplane count");
    }
  }
  return rep;
}

Realization realize_linear_set_as_splash(const fieldred::ReductionContext& ctx, const fieldred::LinearSet& l) {
  if (ctx.r() != 2) throw Error(ErrorCode::DimensionMismatch, "linear set must live on PG(1, q^n)");
  if (l.rank < 2) throw Error(ErrorCode::DegenerateLinearSet, "rank must be at least 2");
  if (l.points.size() < 2) throw Error(ErrorCode::DegenerateLinearSet, "linear set is a single point");
  const auto basis = fieldred::contracted_basis(ctx, l.subspace);
  const std::size_t r = basis.size();
  // Lambda: e_i -> v_i; the line is the annihilator of ker Lambda, spanned by
  // the two columns of the r x 2 matrix with rows v_i
  Vec a;
  Vec b;
  for (const auto& v : basis) {
    a.push_back(-v[1]);
    b.push_back(v[0]);
  }
  LineFrame id(a, b);
  subgeo::Subgeometry pi0 = subgeo::canonical_subgeometry(ctx.tower_ref(), r);
  return Realization{std::move(pi0), id.line(), std::move(id)};
}

bool verify_realization(const Realization& re, const fieldred::LinearSet& l) {
  const Splash s = in_frame(compute_splash(re.pi0, re.line), re.identification);
  if (s.points != l.points) return false;
  const std::uint64_t q = re.pi0.tower().q();
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    if (pg::theta(q, l.weights[i]) != static_cast<std::uint64_t>(s.hyperplane_counts[i])) return false;
  }
  return true;
}

namespace {

// c_j with U_j = <v + c_j t>, or nullopt if some U_j equals T.
std::optional<std::vector<FieldElement>> offsets(const ProjPoint& t, std::span<const ProjPoint> u) {
  const gf::Field& f = t.field();
  const Vec both[] = {u[0].coords(), t.coords()};
  const Matrix cols = Matrix::from_columns(f, both, 2);
  std::vector<FieldElement> out;
  for (std::size_t j = 1; j < u.size(); ++j) {
    auto x = linalg::solve(cols, u[j].coords());
    if (!x || (*x)[0].is_zero()) return std::nullopt;
    out.push_back((*x)[1] / (*x)[0]);
  }
  return out;
}

bool distinct_points(const ProjPoint& t, std::span<const ProjPoint> u) {
  std::vector<ProjPoint> all(u.begin(), u.end());
  all.push_back(t);
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

}  // namespace

bool admissible_tuple(const gf::Tower& tower, const ProjPoint& t, std::span<const ProjPoint> u) {
  if (u.size() < 2 || !distinct_points(t, u)) return false;
  auto c = offsets(t, u);
  if (!c) return false;
  return tower.independent(*c);
}

Splash tangent_splash_through(const fieldred::ReductionContext& ctx, const ProjPoint& t, std::span<const ProjPoint> u) {
  if (ctx.r() != 2 || t.size() != 2) throw Error(ErrorCode::DimensionMismatch, "points must lie on PG(1, q^n)");
  const std::size_t r = u.size();
  if (r < 3) throw Error(ErrorCode::ParameterDomain, "rank must be at least 3");
  if (r > ctx.n()) throw Error(ErrorCode::RankExceedsN, "rank exceeds n");
  if (!distinct_points(t, u)) throw Error(ErrorCode::NotDistinct, "T and the U_j must be distinct");
  auto c = offsets(t, u);
  if (!c) throw Error(ErrorCode::NotDistinct, "a U_j equals T");
  std::vector<FieldElement> kept;
  for (const auto& cj : *c) {
    kept.push_back(cj);
    if (!ctx.tower().independent(kept)) {
      throw Error(ErrorCode::GeneralPositionViolated,
                  "U_" + std::to_string(kept.size() + 1) + " lies in a lower-rank tangent splash with centre T");
    }
  }
  std::vector<Vec> gens{u[0].coords()};
  for (const auto& cj : kept) gens.push_back(linalg::scale(cj, t.coords()));
  const fieldred::LinearSet ls = fieldred::linear_set_of_span(ctx, gens);
  Splash s = splash_of_club(ls);
  if (s.centre != t) throw std::logic_error("constructed club has the wrong head");
  return s;
}

Splash splash_of_club(const fieldred::LinearSet& club) {
  const auto cls = fieldred::classify_linear_set(club);
  if (cls.kind != fieldred::LinearSetKind::Club) throw Error(ErrorCode::NotTangent, "linear set is not a club");
  const gf::Field& f = club.points.front().field();
  return Splash{ProjSubspace::whole(f, 2), club.points, {}, SplashKind::Tangent, cls.head, club.rank,
                std::nullopt, std::nullopt, club};
}

namespace {

BigInt bpow(std::uint64_t b, std::uint64_t e) {
  BigInt r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

BigInt count_tangent_splashes(std::uint64_t q, std::uint64_t n, std::uint64_t r, bool per_centre) {
  if (r < 3 || r > n) throw Error(ErrorCode::ParameterDomain, "counting requires 3 <= r <= n");
  mp::cpp_rational value = mp::cpp_rational(bpow(q, n + 1 - r));
  for (std::uint64_t i = 0; i + 2 <= r; ++i) {
    value *= mp::cpp_rational(bpow(q, n - i) - 1, bpow(q, r - 1 - i) - 1);
  }
  if (!per_centre) value *= mp::cpp_rational(bpow(q, n) + 1);
  if (mp::denominator(value) != 1) throw std::logic_error("tangent splash count is not an integer");
  return mp::numerator(value);
}

BigInt tangent_tuple_count(std::uint64_t q, std::uint64_t n, std::uint64_t r) {
  BigInt k = bpow(q, n);
  for (std::uint64_t i = 0; i + 2 <= r; ++i) k *= bpow(q, n) - bpow(q, i);
  return k;
}

BigInt tuples_per_splash(std::uint64_t q, std::uint64_t r) {
  BigInt k = bpow(q, r - 1);
  for (std::uint64_t i = 0; i + 2 <= r; ++i) k *= bpow(q, r - 1) - bpow(q, i);
  return k;
}

BigInt gaussian_binomial(std::uint64_t q, std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  mp::cpp_rational v = 1;
  for (std::uint64_t i = 0; i < k; ++i) v *= mp::cpp_rational(bpow(q, n - i) - 1, bpow(q, i + 1) - 1);
  return mp::numerator(v);
}

std::vector<Splash> enumerate_tangent_splashes(const fieldred::ReductionContext& ctx, std::size_t r,
                                               const std::optional<ProjPoint>& centre, unsigned workers) {
  if (ctx.r() != 2) throw Error(ErrorCode::ParameterDomain, "tangent splashes are enumerated on PG(1, q^n)");
  if (r < 3 || r > 2 * ctx.n()) throw Error(ErrorCode::ParameterDomain, "rank out of range");
  const pg::SubspaceEnumerator subspaces(ctx.base(), ctx.reduced_len(), r);
  if (subspaces.size() > 20'000'000) throw Error(ErrorCode::ParameterDomain, "subspace universe too large");
  workers = std::max(1u, workers);

  // keyed by (head, point set): one point set can be a club for several heads
  using Key = std::pair<ProjPoint, std::vector<ProjPoint>>;
  using Found = std::map<Key, std::pair<std::uint64_t, fieldred::LinearSet>>;
  std::vector<Found> partial(workers);
  const std::uint64_t total = subspaces.size();
  auto work = [&](unsigned w) {
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    Found& out = partial[w];
    for (std::uint64_t i = begin; i < end; ++i) {
      const ProjSubspace u(ctx.base(), ctx.reduced_len(), subspaces.at(i));
      fieldred::LinearSet ls = fieldred::linear_set(ctx, u);
      const auto cls = fieldred::classify_linear_set(ls);
      if (cls.kind != fieldred::LinearSetKind::Club) continue;
      if (centre && cls.head != centre) continue;
      out.try_emplace(Key{*cls.head, ls.points}, i, std::move(ls));  // ranges ascend, first hit has the lowest index
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  Found merged;
  for (auto& part : partial) {
    for (auto& [key, val] : part) {
      auto [it, inserted] = merged.try_emplace(key, val);
      if (!inserted && val.first < it->second.first) it->second = val;
    }
  }
  std::vector<Splash> out;
  out.reserve(merged.size());
  for (auto& [key, val] : merged) {
    Splash s = splash_of_club(val.second);
    if (s.centre != key.first) throw std::logic_error("club head changed on rebuild");
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fgeom::splash
