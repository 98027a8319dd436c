#include "fgeom/equiv.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <thread>

namespace fgeom::equiv {

namespace {

Vec row_times(std::span<const FieldElement> x, const Matrix& m) {
  Vec out(m.cols(), m.field().zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += x[i] * m(i, j);
  }
  return out;
}

Matrix lift(const gf::Tower& tower, const Matrix& m) {
  Matrix out(*tower.ext(), m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = tower.lift(m(i, j));
  }
  return out;
}

bool same_splash(const Splash& a, const Splash& b) {
  return a.points == b.points && a.hyperplane_counts == b.hyperplane_counts;
}

FieldElement random_element(const gf::Field& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, f.order() - 1);
  return f.element(pick(rng));
}

Matrix random_invertible(const gf::Field& f, std::size_t k, std::mt19937_64& rng) {
  for (;;) {
    Matrix m(f, k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) m(i, j) = random_element(f, rng);
    }
    if (linalg::rank(m) == k) return m;
  }
}

/// Columns a, b followed by standard vectors completing them to a basis.
Matrix completed_basis(const LineFrame& frame) {
  const gf::Field& f = frame.a().front().field();
  const std::size_t len = frame.ambient_len();
  std::vector<Vec> cols{frame.a(), frame.b()};
  for (std::size_t k = 0; k < len && cols.size() < len; ++k) {
    Vec e(len, f.zero());
    e[k] = f.one();
    cols.push_back(e);
    if (linalg::rank(Matrix::from_columns(f, cols, len)) != cols.size()) cols.pop_back();
  }
  return Matrix::from_columns(f, cols, len);
}

Collineation conjugated_block(const Matrix& p, const Matrix& block, std::uint32_t j) {
  const Matrix inv = *linalg::inverse(linalg::frobenius(p, j));
  return Collineation(p * block * inv, j);
}

std::uint32_t frobenius_period(const gf::Field& f, Group group) { return group == Group::PGL ? 1 : f.degree(); }

std::vector<int> point_weights(const Splash& s) {
  if (s.defining_set) return s.defining_set->weights;
  std::vector<int> w(s.points.size(), 1);
  if (s.origin && !s.hyperplane_counts.empty()) {
    const std::uint64_t q = s.origin->tower().q();
    for (std::size_t i = 0; i < w.size(); ++i) {
      int k = 0;
      while (pg::theta(q, k) < static_cast<std::uint64_t>(s.hyperplane_counts[i])) ++k;
      w[i] = k;
    }
  }
  return w;
}

}  // namespace

std::vector<FieldElement> SplashCoordinates::weights() const {
  std::vector<FieldElement> out{u.front().field().one()};
  out.insert(out.end(), rho.begin(), rho.end());
  return out;
}

std::vector<ProjPoint> SplashCoordinates::regenerate(const gf::Tower& tower) const {
  const auto w = weights();
  std::vector<ProjPoint> out{ProjPoint(u)};
  const auto base = tower.base()->elements();
  std::vector<std::size_t> digits(w.size(), 0);
  for (;;) {
    FieldElement c = tower.ext()->zero();
    for (std::size_t i = 0; i < w.size(); ++i) c += tower.lift(base[digits[i]]) * w[i];
    out.emplace_back(linalg::add(v, linalg::scale(c, u)));
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == base.size()) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SplashCoordinates splash_coordinates(const gf::Tower& tower, const Splash& s, const ProjPoint& p) {
  if (s.kind != splash::SplashKind::Tangent || !s.centre) throw Error(ErrorCode::NotTangent, "splash is not tangent");
  if (p == *s.centre || !s.contains(p)) throw Error(ErrorCode::ParameterDomain, "P must be a non-centre point of S");
  const gf::Field& f = p.field();
  const Vec& t = s.centre->coords();
  const Vec& v0 = p.coords();
  const Vec both[] = {v0, t};
  const Matrix cols = Matrix::from_columns(f, both, v0.size());
  std::vector<FieldElement> cs;
  for (const auto& x : s.points) {
    if (x == p || x == *s.centre) continue;
    auto ab = linalg::solve(cols, x.coords());
    if (!ab || (*ab)[0].is_zero()) throw Error(ErrorCode::NotTangent, "splash points are not on one line");
    cs.push_back((*ab)[1] / (*ab)[0]);
    if (!tower.independent(cs)) cs.pop_back();
  }
  if (cs.empty()) throw Error(ErrorCode::NotTangent, "splash has too few points");
  SplashCoordinates out{LineFrame::of_line(s.line), t, linalg::scale(cs[0].inverse(), v0), {}, static_cast<int>(cs.size()) + 1};
  for (std::size_t i = 1; i < cs.size(); ++i) out.rho.push_back(cs[i] / cs[0]);
  if (out.regenerate(tower) != s.points) throw Error(ErrorCode::NotTangent, "point set is not a club");
  return out;
}

const SubHyperplane& hyperplane_through(const Subgeometry& pi0, const ProjSubspace& line, const ProjPoint& p) {
  const SubHyperplane* found = nullptr;
  for (const auto& h : pi0.hyperplanes()) {
    if (!h.extension.contains(p)) continue;
    if (h.extension.contains(line)) throw Error(ErrorCode::LineInExtendedHyperplane, "line lies in an extended hyperplane");
    if (found) throw Error(ErrorCode::NoSolution, "P lies on several extended hyperplanes");
    found = &h;
  }
  if (!found) throw Error(ErrorCode::NoSolution, "no extended hyperplane through P");
  return *found;
}

std::vector<ProjPoint> subgeometry_points(const gf::Tower& tower, std::span<const Vec> vectors) {
  std::vector<ProjPoint> out;
  if (vectors.empty()) return out;
  const gf::Field& f = *tower.ext();
  pg::for_each_point(ProjSubspace::whole(*tower.base(), vectors.size()), [&](const ProjPoint& lambda) {
    Vec acc(vectors.front().size(), f.zero());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      if (!lambda[i].is_zero()) acc = linalg::add(acc, linalg::scale(tower.lift(lambda[i]), vectors[i]));
    }
    if (!linalg::is_zero(acc)) out.emplace_back(std::move(acc));
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

STupleSolution solve_s_tuple(const Subgeometry& pi0, const ProjSubspace& line, const SplashCoordinates& coords,
                             const SubHyperplane& h0) {
  const gf::Tower& tower = pi0.tower();
  const gf::Field& f = pi0.field();
  const gf::Field& k = *tower.base();
  const std::size_t r = pi0.rank();
  if (static_cast<std::size_t>(coords.rank) != r || coords.u.size() != r) {
    throw Error(ErrorCode::NoSolution, "coordinates do not match the subgeometry's rank");
  }
  if (!line.contains(coords.u) || !line.contains(coords.v)) throw Error(ErrorCode::NoSolution, "coordinates not on the line");
  if (!h0.extension.contains(coords.v)) throw Error(ErrorCode::NoSolution, "P is not on the extended hyperplane");
  if (h0.extension.contains(coords.u)) throw Error(ErrorCode::NoSolution, "centre lies on the extended hyperplane");

  const Matrix& b = pi0.basis();
  const Matrix binv = *linalg::inverse(b);
  const Vec x = row_times(coords.u, binv);
  const auto lead = std::find_if(x.begin(), x.end(), [](const FieldElement& e) { return !e.is_zero(); });
  const FieldElement zeta = *lead;
  for (const auto& xi : x) {
    if (!tower.in_base(xi / zeta)) throw Error(ErrorCode::NoSolution, "centre is not a point of the subgeometry");
  }

  Matrix crow(k, 1, r);
  for (std::size_t i = 0; i < r; ++i) crow(0, i) = h0.coefficients[i];
  const Matrix ker = linalg::kernel(crow);
  std::vector<Vec> z;
  for (std::size_t j = 0; j < ker.rows(); ++j) {
    Vec lifted;
    for (std::size_t i = 0; i < r; ++i) lifted.push_back(tower.lift(ker(j, i)));
    z.push_back(linalg::scale(zeta, row_times(lifted, b)));
  }
  const auto xi = linalg::solve(Matrix::from_columns(f, z, r), coords.v);
  if (!xi) throw Error(ErrorCode::NoSolution, "v is not in the span of the hyperplane");

  const auto rho = coords.weights();
  std::vector<Vec> rho_exp;
  for (const auto& e : rho) rho_exp.push_back(tower.expand(e));
  const Matrix rho_cols = Matrix::from_columns(k, rho_exp, tower.n());
  Matrix a(k, r - 1, r - 1);
  for (std::size_t j = 0; j < r - 1; ++j) {
    const auto col = linalg::solve(rho_cols, tower.expand((*xi)[j]));
    if (!col) throw Error(ErrorCode::NoSolution, "xi is not a GF(q)-combination of the rho_i");
    for (std::size_t i = 0; i < r - 1; ++i) a(i, j) = (*col)[i];
  }
  if (!linalg::inverse(a)) throw Error(ErrorCode::NoSolution, "coefficient matrix is singular");

  std::vector<Vec> s;
  for (std::size_t i = 0; i < r - 1; ++i) {
    Vec acc(r, f.zero());
    for (std::size_t j = 0; j < r - 1; ++j) acc = linalg::add(acc, linalg::scale(tower.lift(a(i, j)), z[j]));
    s.push_back(std::move(acc));
  }

  Vec check(r, f.zero());
  for (std::size_t i = 0; i < r - 1; ++i) check = linalg::add(check, linalg::scale(rho[i], s[i]));
  if (check != coords.v) throw std::logic_error("s does not reproduce v");
  if (subgeometry_points(tower, s) != h0.points) throw std::logic_error("s does not span the hyperplane");
  std::vector<Vec> rows = s;
  rows.push_back(coords.u);
  if (!(Subgeometry(pi0.tower_ref(), Matrix::from_rows(f, rows, r)) == pi0)) {
    throw std::logic_error("u and s do not span the subgeometry");
  }

  STupleSolution out{STuple{s, zeta, a}, {}, true};
  out.alternatives.push_back({f.one(), Matrix::identity(k, r - 1), s});

  const std::size_t entries = (r - 1) * (r - 1);
  const double space = std::pow(static_cast<double>(k.order()), static_cast<double>(entries));
  if (space > double(1 << 22)) {
    out.certificate_complete = false;
    return out;
  }
  const auto kel = k.elements();
  std::vector<std::size_t> digits(entries, 0);
  for (;;) {
    Matrix m(k, r - 1, r - 1);
    for (std::size_t e = 0; e < entries; ++e) m(e / (r - 1), e % (r - 1)) = kel[digits[e]];
    const Vec y = row_times(rho, lift(tower, m));
    const FieldElement zp = y[0];
    if (!zp.is_zero() && y == linalg::scale(zp, rho) && linalg::inverse(m)) {
      const FieldElement zinv = zp.inverse();
      std::vector<Vec> sp;
      for (std::size_t i = 0; i < r - 1; ++i) {
        Vec acc(r, f.zero());
        for (std::size_t j = 0; j < r - 1; ++j) acc = linalg::add(acc, linalg::scale(tower.lift(m(i, j)), s[j]));
        sp.push_back(linalg::scale(zinv, acc));
      }
      const bool known = std::any_of(out.alternatives.begin(), out.alternatives.end(),
                                     [&](const Ambiguity& amb) { return amb.s == sp; });
      if (!known) out.alternatives.push_back({zp, m, std::move(sp)});
    }
    std::size_t e = 0;
    while (e < entries && ++digits[e] == kel.size()) digits[e++] = 0;
    if (e == entries) break;
  }
  return out;
}

std::vector<InvariantCheck> witness_invariants(const SameSplashWitness& w) {
  const gf::Tower& tower = w.pi0.tower();
  const Splash s0 = splash::compute_splash(w.pi0, w.line);
  const Splash s1 = splash::compute_splash(w.pi1, w.line);
  std::vector<InvariantCheck> out;
  out.push_back({"subgeometries_distinct", !(w.pi0 == w.pi1)});
  out.push_back({"splashes_equal", same_splash(s0, s1)});
  out.push_back({"tangent_at_centre", s0.kind == splash::SplashKind::Tangent && s0.centre == w.centre});
  out.push_back({"hyperplane_shared", std::all_of(w.h0.points.begin(), w.h0.points.end(), [&](const ProjPoint& p) {
                   return w.pi0.contains(p) && w.pi1.contains(p);
                 })});
  out.push_back({"centre_off_hyperplane", !w.h0.extension.contains(w.centre)});

  const Vec mw = lift(tower, w.m0) * std::span<const FieldElement>(w.w);
  out.push_back({"eigenvector", mw == linalg::scale(w.zeta, w.w) && w.w.front().is_one()});
  out.push_back({"rho_independent", tower.independent(w.rho)});
  const Vec mrho = lift(tower, w.m) * std::span<const FieldElement>(w.rho);
  out.push_back({"block_eigenvector", mrho == linalg::scale(w.zeta, w.rho)});

  const gf::Field& f = w.pi0.field();
  Vec v0(w.r, f.zero());
  Vec v1(w.r, f.zero());
  for (std::size_t i = 0; i + 1 < w.r; ++i) {
    v0 = linalg::add(v0, linalg::scale(w.rho[i], w.s[i]));
    v1 = linalg::add(v1, linalg::scale(w.rho[i], w.s_prime[i]));
  }
  out.push_back({"s_prime_reproduces_v", v0 == v1});

  const Collineation on_line = restrict_to_line(w.kappa, LineFrame::of_line(w.line));
  const Matrix& g = on_line.matrix();
  const bool scalar = g(0, 1).is_zero() && g(1, 0).is_zero() && g(0, 0) == g(1, 1);
  out.push_back({"kappa_fixes_line_pointwise", w.kappa.is_projectivity() && scalar});
  out.push_back({"kappa_maps_pi0_to_pi1", subgeo::apply(w.kappa, w.pi0) == w.pi1});
  return out;
}

SameSplashWitness construct_same_splash_pair(std::uint64_t q, std::uint32_t n, std::size_t r) {
  if (r < 3) throw Error(ErrorCode::ParameterDomain, "r must be at least 3");
  if (r - 1 > n) throw Error(ErrorCode::ParameterDomain, "r - 1 exceeds n");
  const std::uint32_t d = std::gcd(n, static_cast<std::uint32_t>(r - 1));
  if (d == 1) throw Error(ErrorCode::GcdIsOne, "gcd(n, r-1) = 1");
  const auto tower = gf::Tower::make(q, n);
  const gf::Field& f = *tower->ext();
  const gf::Field& k = *tower->base();

  std::optional<FieldElement> zeta;
  for (const auto& e : f.elements()) {
    if (tower->degree_over_base(e) == d) {
      zeta = e;
      break;
    }
  }
  const gf::Polynomial minpoly = gf::minimal_polynomial(*zeta, q);
  Matrix m0(k, d, d);
  for (std::uint32_t i = 0; i + 1 < d; ++i) m0(i, i + 1) = k.one();
  for (std::uint32_t j = 0; j < d; ++j) m0(d - 1, j) = -minpoly.coeffs[j];

  Matrix shifted = lift(*tower, m0);
  for (std::uint32_t i = 0; i < d; ++i) shifted(i, i) -= *zeta;
  const Matrix eig = linalg::kernel(shifted);
  if (eig.rows() != 1 || eig(0, 0).is_zero()) throw std::logic_error("companion eigenspace is not a line");
  const Vec w = linalg::scale(eig(0, 0).inverse(), eig.row_vec(0));

  std::vector<FieldElement> omega;
  std::vector<FieldElement> products;
  FieldElement candidate = f.one();
  while (omega.size() < n / d) {
    std::vector<FieldElement> trial = products;
    for (const auto& wj : w) trial.push_back(candidate * wj);
    if (tower->independent(trial)) {
      omega.push_back(candidate);
      products = std::move(trial);
    }
    candidate *= f.primitive();
  }

  std::vector<FieldElement> rho(products.begin(), products.begin() + static_cast<std::ptrdiff_t>(r - 1));
  Matrix m(k, r - 1, r - 1);
  for (std::size_t blk = 0; blk < (r - 1) / d; ++blk) {
    for (std::uint32_t i = 0; i < d; ++i) {
      for (std::uint32_t j = 0; j < d; ++j) m(blk * d + i, blk * d + j) = m0(i, j);
    }
  }

  const fieldred::ReductionContext ctx2(tower, 2);
  std::vector<Vec> gens;
  for (const auto& e : rho) gens.push_back({e, f.zero()});
  gens.push_back({f.zero(), f.one()});
  const fieldred::LinearSet club = fieldred::linear_set_of_span(ctx2, gens);
  const auto re = splash::realize_linear_set_as_splash(ctx2, club);

  const Vec& u = re.identification.a();
  const Vec& v = re.identification.b();
  const Splash s0 = splash::compute_splash(re.pi0, re.line);
  const ProjPoint centre(u);
  if (s0.kind != splash::SplashKind::Tangent || s0.centre != centre) throw std::logic_error("club did not realize as tangent");
  SplashCoordinates coords{LineFrame::of_line(re.line), u, v, {rho.begin() + 1, rho.end()}, static_cast<int>(r)};
  if (coords.regenerate(*tower) != s0.points) throw std::logic_error("coordinates do not regenerate the splash");

  const SubHyperplane h0 = hyperplane_through(re.pi0, re.line, ProjPoint(v));
  const auto sol = solve_s_tuple(re.pi0, re.line, coords, h0);
  const auto& s = sol.canonical.s;

  const FieldElement zinv = zeta->inverse();
  std::vector<Vec> sp;
  for (std::size_t i = 0; i + 1 < r; ++i) {
    Vec acc(r, f.zero());
    for (std::size_t j = 0; j + 1 < r; ++j) acc = linalg::add(acc, linalg::scale(tower->lift(m(j, i)), s[j]));
    sp.push_back(linalg::scale(zinv, acc));
  }
  std::vector<Vec> rows0{u};
  std::vector<Vec> rows1{u};
  rows0.insert(rows0.end(), s.begin(), s.end());
  rows1.insert(rows1.end(), sp.begin(), sp.end());
  Subgeometry pi1(tower, Matrix::from_rows(f, rows1, r));
  const Matrix c0 = Matrix::from_columns(f, rows0, r);
  const Matrix c1 = Matrix::from_columns(f, rows1, r);
  Collineation kappa(c1 * *linalg::inverse(c0));

  SameSplashWitness out{q,    n,        r, re.pi0, std::move(pi1), re.line, centre, h0, *zeta, m0, w, omega,
                        rho,  m,        s, sp,     std::move(kappa)};
  for (const auto& check : witness_invariants(out)) {
    if (!check.holds) throw std::logic_error("witness invariant failed: " + check.name);
  }
  return out;
}

Collineation find_projectivity_same_splash(const Subgeometry& pi0, const Subgeometry& pi1, const ProjSubspace& line) {
  if (&pi0.tower() != &pi1.tower() || pi0.rank() != pi1.rank()) {
    throw Error(ErrorCode::AmbientMismatch, "subgeometries live in different spaces");
  }
  const Splash s0 = splash::compute_splash(pi0, line);
  const Splash s1 = splash::compute_splash(pi1, line);
  if (!same_splash(s0, s1)) throw Error(ErrorCode::SplashesDiffer, "the splashes differ");
  if (s0.kind != splash::SplashKind::Tangent) throw Error(ErrorCode::NotTangent, "line is not tangent");
  const gf::Field& f = pi0.field();
  if (pi0 == pi1) return Collineation::identity(f, pi0.rank());

  const auto p = std::find_if(s0.points.begin(), s0.points.end(), [&](const ProjPoint& x) { return x != *s0.centre; });
  const SplashCoordinates coords = splash_coordinates(pi0.tower(), s0, *p);
  const auto s = solve_s_tuple(pi0, line, coords, hyperplane_through(pi0, line, *p)).canonical.s;
  const auto sp = solve_s_tuple(pi1, line, coords, hyperplane_through(pi1, line, *p)).canonical.s;
  std::vector<Vec> cols0{coords.u};
  std::vector<Vec> cols1{coords.u};
  cols0.insert(cols0.end(), s.begin(), s.end());
  cols1.insert(cols1.end(), sp.begin(), sp.end());
  const std::size_t r = pi0.rank();
  Collineation kappa(Matrix::from_columns(f, cols1, r) * *linalg::inverse(Matrix::from_columns(f, cols0, r)));
  if (pg::apply(kappa, line) != line || !(subgeo::apply(kappa, pi0) == pi1)) {
    throw std::logic_error("connecting projectivity fails its postconditions");
  }
  return kappa;
}

SharedHyperplaneScan shared_hyperplane_scan(const Subgeometry& pi0, const ProjSubspace& line) {
  const Splash s = splash::compute_splash(pi0, line);
  if (s.kind != splash::SplashKind::Tangent) throw Error(ErrorCode::NotTangent, "line is not tangent");
  const gf::Tower& tower = pi0.tower();
  const gf::Field& f = pi0.field();
  SharedHyperplaneScan out;
  for (const auto& h : pi0.hyperplanes()) {
    if (h.extension.contains(*s.centre)) continue;
    const ProjSubspace meet = pg::meet(h.extension, line);
    const ProjPoint p(meet.basis().row_vec(0));
    const SplashCoordinates coords = splash_coordinates(tower, s, p);
    const auto sol = solve_s_tuple(pi0, line, coords, h);
    for (const auto& mu : f.elements()) {
      if (mu.is_zero()) continue;
      std::vector<Vec> rows = sol.canonical.s;
      rows.push_back(linalg::scale(mu, coords.u));
      const Subgeometry pi1(pi0.tower_ref(), Matrix::from_rows(f, rows, pi0.rank()));
      ++out.configurations;
      if (same_splash(splash::compute_splash(pi1, line), s)) {
        ++out.same_splash;
        if (!(pi1 == pi0)) ++out.same_splash_but_distinct;
      }
    }
  }
  return out;
}

std::string to_string(Group g) { return g == Group::PGL ? "PGL" : "PGammaL"; }

Matrix three_point_map(std::span<const ProjPoint, 3> x, std::span<const ProjPoint, 3> y) {
  auto normal_form = [](std::span<const ProjPoint, 3> p) {
    const gf::Field& f = p[0].field();
    const Vec two[] = {p[0].coords(), p[1].coords()};
    const auto ab = linalg::solve(Matrix::from_columns(f, two, 2), p[2].coords());
    if (!ab || (*ab)[0].is_zero() || (*ab)[1].is_zero()) throw Error(ErrorCode::NotDistinct, "frame points must be distinct");
    const Vec cols[] = {linalg::scale((*ab)[0], p[0].coords()), linalg::scale((*ab)[1], p[1].coords())};
    return Matrix::from_columns(f, cols, 2);
  };
  return normal_form(y) * *linalg::inverse(normal_form(x));
}

std::vector<ProjPoint> image(const Collineation& c, std::span<const ProjPoint> pts) {
  std::vector<ProjPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(pg::apply(c, p));
  std::sort(out.begin(), out.end());
  return out;
}

EquivalenceResult splash_equivalence(const Splash& s0, const Splash& s1, Group group, std::uint64_t budget,
                                     unsigned workers) {
  if (s0.line.ambient_len() != 2 || s1.line.ambient_len() != 2) {
    throw Error(ErrorCode::DimensionMismatch, "splashes must be given in PG(1) coordinates");
  }
  const gf::Field& f = s0.line.field();
  if (&s1.line.field() != &f) throw Error(ErrorCode::MixedFields, "splashes over different fields");
  EquivalenceResult res;
  res.group = group;

  const auto w0 = point_weights(s0);
  const auto w1 = point_weights(s1);
  auto sorted = [](std::vector<int> w) {
    std::sort(w.begin(), w.end());
    return w;
  };
  if (s0.points.size() != s1.points.size() || sorted(w0) != sorted(w1) || s0.centre.has_value() != s1.centre.has_value()) {
    res.exhaustive = true;
    return res;
  }
  if (s0.points.size() < 3) throw Error(ErrorCode::ParameterDomain, "splash needs at least three points");

  std::array<std::size_t, 3> xi{};
  xi[0] = s0.centre ? static_cast<std::size_t>(std::lower_bound(s0.points.begin(), s0.points.end(), *s0.centre) -
                                                 s0.points.begin())
                    : 0;
  for (std::size_t i = 0, c = 1; c < 3; ++i) {
    if (i != xi[0]) xi[c++] = i;
  }
  const std::array<ProjPoint, 3> x{s0.points[xi[0]], s0.points[xi[1]], s0.points[xi[2]]};
  const std::uint32_t period = frobenius_period(f, group);

  struct Candidate {
    std::array<std::size_t, 3> y;
    std::uint32_t j;
  };
  std::vector<Candidate> cands;
  const std::size_t m = s1.points.size();
  for (std::size_t a = 0; a < m; ++a) {
    if (w1[a] != w0[xi[0]] || (s1.centre && s1.points[a] != *s1.centre)) continue;
    for (std::size_t b = 0; b < m; ++b) {
      if (b == a || w1[b] != w0[xi[1]]) continue;
      for (std::size_t c = 0; c < m; ++c) {
        if (c == a || c == b || w1[c] != w0[xi[2]]) continue;
        for (std::uint32_t j = 0; j < period; ++j) cands.push_back({{a, b, c}, j});
      }
    }
  }
  res.frames_total = cands.size();
  const std::uint64_t limit = std::min<std::uint64_t>(cands.size(), budget);

  std::map<ProjPoint, int> target;
  for (std::size_t i = 0; i < m; ++i) target.emplace(s1.points[i], w1[i]);
  auto try_candidate = [&](const Candidate& cand) -> std::optional<Collineation> {
    std::array<ProjPoint, 3> xs{ProjPoint(linalg::frobenius(x[0].coords(), cand.j)),
                                ProjPoint(linalg::frobenius(x[1].coords(), cand.j)),
                                ProjPoint(linalg::frobenius(x[2].coords(), cand.j))};
    const std::array<ProjPoint, 3> ys{s1.points[cand.y[0]], s1.points[cand.y[1]], s1.points[cand.y[2]]};
    Collineation theta(three_point_map(xs, ys), cand.j);
    for (std::size_t i = 0; i < s0.points.size(); ++i) {
      auto it = target.find(pg::apply(theta, s0.points[i]));
      if (it == target.end() || it->second != w0[i]) return std::nullopt;
    }
    return theta;
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(limit, 1))));
  std::vector<std::optional<std::pair<std::uint64_t, Collineation>>> found(workers);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = limit * w / workers;
    const std::uint64_t end = limit * (w + 1) / workers;
    for (std::uint64_t i = begin; i < end; ++i) {
      if (auto theta = try_candidate(cands[i])) {
        found[w].emplace(i, std::move(*theta));
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& hit : found) {
    if (hit) {
      res.frames_examined = hit->first + 1;
      res.group = hit->second.is_projectivity() ? Group::PGL : Group::PGammaL;
      res.theta = std::move(hit->second);
      return res;
    }
  }
  res.frames_examined = limit;
  if (limit < cands.size()) throw SearchBudgetExceeded(limit, cands.size());
  res.exhaustive = true;
  return res;
}

Collineation extend_from_line(const Collineation& theta, const LineFrame& frame) {
  const gf::Field& f = frame.a().front().field();
  if (theta.size() != 2) throw Error(ErrorCode::DimensionMismatch, "expected a collineation of PG(1)");
  const Matrix p = completed_basis(frame);
  Matrix block = Matrix::identity(f, frame.ambient_len());
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) block(i, j) = theta.matrix()(i, j);
  }
  return conjugated_block(p, block, theta.frobenius_exponent());
}

Collineation restrict_to_line(const Collineation& tau, const LineFrame& frame) {
  const Vec cols[] = {frame.to_line(tau.apply_vector(frame.a())), frame.to_line(tau.apply_vector(frame.b()))};
  return Collineation(Matrix::from_columns(frame.a().front().field(), cols, 2), tau.frobenius_exponent());
}

Collineation random_line_stabilizer(const LineFrame& frame, Group group, std::mt19937_64& rng) {
  const gf::Field& f = frame.a().front().field();
  const std::size_t len = frame.ambient_len();
  const Matrix p = completed_basis(frame);
  Matrix block(f, len, len);
  const Matrix g = random_invertible(f, 2, rng);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) block(i, j) = g(i, j);
  }
  if (len > 2) {
    const Matrix y = random_invertible(f, len - 2, rng);
    for (std::size_t i = 0; i < len - 2; ++i) {
      for (std::size_t j = 0; j < len - 2; ++j) block(i + 2, j + 2) = y(i, j);
    }
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 2; j < len; ++j) block(i, j) = random_element(f, rng);
    }
  }
  std::uniform_int_distribution<std::uint32_t> pick(0, frobenius_period(f, group) - 1);
  return conjugated_block(p, block, pick(rng));
}

Collineation random_pgl2(const gf::Field& f, Group group, std::mt19937_64& rng) {
  const Matrix g = random_invertible(f, 2, rng);
  std::uniform_int_distribution<std::uint32_t> pick(0, frobenius_period(f, group) - 1);
  return Collineation(g, pick(rng));
}

Collineation lift_equivalence(const Subgeometry& pi0, const Subgeometry& pi1, const ProjSubspace& line,
                              const Collineation& theta) {
  const Collineation bar = extend_from_line(theta, LineFrame::of_line(line));
  const Subgeometry moved = subgeo::apply(bar, pi0);
  const Collineation kappa = find_projectivity_same_splash(moved, pi1, line);
  Collineation tau = kappa.compose(bar);
  if (pg::apply(tau, line) != line || !(subgeo::apply(tau, pi0) == pi1)) {
    throw std::logic_error("lifted collineation fails its postconditions");
  }
  return tau;
}

std::vector<Collineation> enumerate_pgl2(const gf::Field& f, Group group) {
  std::vector<Collineation> out;
  const auto el = f.elements();
  const std::uint32_t period = frobenius_period(f, group);
  for (const auto& a : el) {
    for (const auto& b : el) {
      for (const auto& c : el) {
        for (const auto& d : el) {
          const FieldElement lead = !a.is_zero() ? a : b;
          if (!lead.is_one() || (a * d - b * c).is_zero()) continue;
          Matrix m(f, 2, 2);
          m(0, 0) = a;
          m(0, 1) = b;
          m(1, 0) = c;
          m(1, 1) = d;
          for (std::uint32_t j = 0; j < period; ++j) out.emplace_back(m, j);
        }
      }
    }
  }
  return out;
}

OrbitCensus club_orbit_census(const fieldred::ReductionContext& ctx, std::size_t r, Group group, unsigned workers) {
  const auto clubs = splash::enumerate_tangent_splashes(ctx, r, std::nullopt, workers);
  const gf::Field& f = ctx.ext();
  using Key = std::pair<ProjPoint, std::vector<ProjPoint>>;
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < clubs.size(); ++i) index.emplace(Key{*clubs[i].centre, clubs[i].points}, i);

  std::vector<Collineation> gens;
  Matrix translate = Matrix::identity(f, 2);
  translate(0, 1) = f.one();
  Matrix dilate = Matrix::identity(f, 2);
  dilate(0, 0) = f.primitive();
  Matrix swap(f, 2, 2);
  swap(0, 1) = f.one();
  swap(1, 0) = f.one();
  gens.emplace_back(translate);
  gens.emplace_back(dilate);
  gens.emplace_back(swap);
  if (group == Group::PGammaL && f.degree() > 1) gens.emplace_back(Matrix::identity(f, 2), 1);

  OrbitCensus out;
  out.clubs = clubs.size();
  const std::uint64_t order = f.order();
  out.group_order = order * (order * order - 1) * frobenius_period(f, group);
  std::vector<bool> seen(clubs.size(), false);
  for (std::size_t start = 0; start < clubs.size(); ++start) {
    if (seen[start]) continue;
    std::size_t size = 0;
    std::deque<std::size_t> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      ++size;
      for (const auto& g : gens) {
        const auto it = index.find(Key{pg::apply(g, *clubs[cur].centre), image(g, clubs[cur].points)});
        if (it == index.end()) throw std::logic_error("club image is not a club");
        if (!seen[it->second]) {
          seen[it->second] = true;
          queue.push_back(it->second);
        }
      }
    }
    out.orbit_sizes.push_back(size);
  }
  std::sort(out.orbit_sizes.rbegin(), out.orbit_sizes.rend());
  return out;
}

}  // namespace fgeom::equiv
