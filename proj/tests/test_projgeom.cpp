#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fgeom/projgeom.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace fgeom;
using pg::Collineation;
using pg::ProjPoint;
using pg::ProjSubspace;

namespace {

struct Gf8 {
  gf::FieldRef f = gf::field_create(2, 3);
  gf::FieldElement z = f->zero();
  gf::FieldElement o = f->one();
  gf::FieldElement a = f->from_coeffs({0, 1});

  ProjPoint pt(std::initializer_list<gf::FieldElement> c) const { return ProjPoint(linalg::Vec(c)); }
};

std::vector<ProjSubspace> all_subspaces(const gf::Field& f, std::size_t len) {
  std::vector<ProjSubspace> out;
  for (std::size_t k = 0; k <= len; ++k) {
    const pg::SubspaceEnumerator e(f, len, k);
    for (std::uint64_t i = 0; i < e.size(); ++i) out.emplace_back(f, len, e.at(i));
  }
  return out;
}

}  // namespace

TEST(ProjPoint, NormalizedFirstNonzeroIsOne) {
  Gf8 g;
  const ProjPoint p(linalg::Vec{g.z, g.a, g.a * g.a});
  EXPECT_TRUE(p[0].is_zero());
  EXPECT_TRUE(p[1].is_one());
  EXPECT_EQ(p[2], g.a);
  EXPECT_EQ(ProjPoint(p.coords()), p);
  EXPECT_EQ(p, ProjPoint(linalg::scale(g.a + g.o, p.coords())));
  EXPECT_CODE(ParameterDomain, ProjPoint(linalg::Vec{g.z, g.z}));
}

TEST(ProjPoint, TextForm) {
  Gf8 g;
  EXPECT_EQ(g.pt({g.o, g.a}).to_string(), "(1,0,0:0,1,0)");
}

TEST(Span, OnePointIsAPoint) {
  Gf8 g;
  const std::vector pts{g.pt({g.o, g.a, g.z})};
  const auto s = pg::span(pts);
  EXPECT_EQ(s.dim(), 0);
  EXPECT_TRUE(s.contains(pts[0]));
}

TEST(Span, TwoBasisPointsGiveLineX2Zero) {
  Gf8 g;
  const auto l = pg::span(g.pt({g.o, g.z, g.z}), g.pt({g.z, g.o, g.z}));
  EXPECT_EQ(l.dim(), 1);
  EXPECT_EQ(pg::dual(l), ProjSubspace::of_point(g.pt({g.z, g.z, g.o})));
  pg::for_each_point(l, [&](const ProjPoint& p) { EXPECT_TRUE(p[2].is_zero()); });
}

TEST(Span, NonCollinearTripleIsThePlane) {
  Gf8 g;
  const std::vector pts{g.pt({g.o, g.z, g.z}), g.pt({g.o, g.o, g.z}), g.pt({g.a, g.z, g.o})};
  const auto s = pg::span(pts);
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s, ProjSubspace::whole(*g.f, 3));
}

TEST(Span, AmbientMismatch) {
  Gf8 g;
  const std::vector pts{g.pt({g.o, g.z, g.z}), g.pt({g.o, g.o})};
  EXPECT_CODE(AmbientMismatch, pg::span(pts));
  const auto f4 = gf::field_create(2, 2);
  EXPECT_CODE(AmbientMismatch, pg::meet(ProjSubspace::whole(*g.f, 2), ProjSubspace::whole(*f4, 2)));
}

TEST(Meet, LineWithItself) {
  Gf8 g;
  const auto l = pg::span(g.pt({g.o, g.a, g.z}), g.pt({g.z, g.o, g.a}));
  EXPECT_EQ(pg::meet(l, l), l);
}

TEST(Meet, TwoPlaneLinesMeetInAPoint) {
  Gf8 g;
  const auto lines = pg::lines(*g.f, 3);
  ASSERT_EQ(lines.size(), 73u);
  for (std::size_t i = 0; i < lines.size(); i += 7) {
    for (std::size_t j = i + 1; j < lines.size(); j += 5) EXPECT_EQ(pg::meet(lines[i], lines[j]).dim(), 0);
  }
}

TEST(Meet, SkewLineAndPointInPG3) {
  Gf8 g;
  const auto l = pg::span(g.pt({g.o, g.z, g.z, g.z}), g.pt({g.z, g.o, g.z, g.z}));
  const auto p = ProjSubspace::of_point(g.pt({g.z, g.z, g.o, g.a}));
  EXPECT_EQ(pg::meet(l, p).dim(), -1);
  EXPECT_EQ(pg::meet(l, p), ProjSubspace::empty(*g.f, 4));
}

TEST(Dual, DimensionsAndInvolution) {
  Gf8 g;
  const auto h = pg::hyperplanes(*g.f, 4);
  ASSERT_EQ(h.size(), pg::theta(8, 4));
  for (std::size_t i = 0; i < h.size(); i += 37) {
    EXPECT_EQ(h[i].dim(), 2);
    EXPECT_EQ(pg::dual(h[i]).dim(), 0);
    EXPECT_EQ(pg::dual(pg::dual(h[i])), h[i]);
  }
  // In PG(r-1) the dual of an (r-3)-space is a line; r = 4.
  const auto z = pg::span(g.pt({g.o, g.a, g.z, g.z}), g.pt({g.z, g.z, g.o, g.o}));
  EXPECT_EQ(z.dim(), 1);
  EXPECT_EQ(pg::dual(z).dim(), 1);
  const auto r5 = ProjSubspace::of_point(ProjPoint(linalg::Vec{g.o, g.z, g.a, g.z, g.o}));
  EXPECT_EQ(pg::dual(r5).dim(), 3);
  EXPECT_EQ(pg::dual(ProjSubspace::empty(*g.f, 3)), ProjSubspace::whole(*g.f, 3));
}

TEST(Dual, AnnihilatesUnderDotProduct) {
  const auto f = gf::field_create(3, 2);
  for (const auto& s : all_subspaces(*f, 3)) {
    const auto d = pg::dual(s);
    for (std::size_t i = 0; i < s.basis().rows(); ++i) {
      for (std::size_t j = 0; j < d.basis().rows(); ++j) EXPECT_TRUE(linalg::dot(s.basis().row(i), d.basis().row(j)).is_zero());
    }
  }
}

TEST(Lattice, DualityExchangesSpanAndMeetPG24AndPG28) {
  for (std::uint32_t k : {2u, 3u}) {
    const auto f = gf::field_create(2, k);
    const auto subs = all_subspaces(*f, 3);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      for (std::size_t j = 0; j < subs.size(); j += (k == 3 ? 7 : 1)) {
        const auto& a = subs[i];
        const auto& b = subs[(i * 13 + j) % subs.size()];
        ASSERT_EQ(pg::dual(pg::span(a, b)), pg::meet(pg::dual(a), pg::dual(b)));
        ASSERT_EQ(pg::meet(a, pg::span(a, b)), a);
        ASSERT_GE(pg::meet(a, b).dim(), a.dim() + b.dim() - 2);
      }
    }
  }
}

TEST(EnumeratePoints, Counts) {
  Gf8 g;
  EXPECT_EQ(pg::enumerate_points(ProjSubspace::whole(*g.f, 2)).size(), 9u);
  EXPECT_EQ(pg::enumerate_points(ProjSubspace::whole(*g.f, 3)).size(), 73u);
  EXPECT_TRUE(pg::enumerate_points(ProjSubspace::empty(*g.f, 3)).empty());
  const auto pts = pg::all_points(*g.f, 3);
  EXPECT_EQ(std::set<ProjPoint>(pts.begin(), pts.end()).size(), 73u);
}

TEST(EnumeratePoints, Deterministic) {
  const auto f = gf::field_create(3, 2);
  const auto l = pg::lines(*f, 3)[17];
  const auto a = pg::enumerate_points(l);
  EXPECT_EQ(a, pg::enumerate_points(l));
  EXPECT_EQ(a.size(), 10u);
  for (const auto& p : a) EXPECT_TRUE(l.contains(p));
}

TEST(Theta, VectorDimensionConvention) {
  EXPECT_EQ(pg::theta(2, 3), 7u);
  EXPECT_EQ(pg::theta(8, 2), 9u);
  EXPECT_EQ(pg::theta(3, 1), 1u);
  EXPECT_EQ(pg::theta(3, 0), 0u);
}

TEST(SubspaceEnumerator, GaussianBinomialSizes) {
  const auto f2 = gf::field_create(2, 1);
  EXPECT_EQ(pg::SubspaceEnumerator(*f2, 6, 3).size(), 1395u);
  EXPECT_EQ(pg::SubspaceEnumerator(*f2, 4, 2).size(), 35u);
  const auto f3 = gf::field_create(3, 1);
  EXPECT_EQ(pg::SubspaceEnumerator(*f3, 6, 3).size(), 33880u);
  const pg::SubspaceEnumerator e(*f2, 5, 2);
  std::set<ProjSubspace> seen;
  for (std::uint64_t i = 0; i < e.size(); ++i) {
    ProjSubspace s(*f2, 5, e.at(i));
    EXPECT_EQ(s.dim(), 1);
    seen.insert(s);
  }
  EXPECT_EQ(seen.size(), e.size());
  EXPECT_CODE(ParameterDomain, e.at(e.size()));
}

TEST(Apply, IdentityFixesEverything) {
  Gf8 g;
  const auto id = Collineation::identity(*g.f, 3);
  for (const auto& p : pg::all_points(*g.f, 3)) EXPECT_EQ(pg::apply(id, p), p);
}

TEST(Apply, DiagonalScalesSecondCoordinate) {
  Gf8 g;
  const auto lam = g.a * g.a + g.o;
  linalg::Matrix d = linalg::Matrix::identity(*g.f, 2);
  d(1, 1) = lam;
  const Collineation c(d);
  for (const auto& t : g.f->elements()) EXPECT_EQ(pg::apply(c, g.pt({g.o, t})), g.pt({g.o, lam * t}));
}

TEST(Apply, PureFrobenius) {
  Gf8 g;
  const Collineation c(linalg::Matrix::identity(*g.f, 2), 1);
  EXPECT_FALSE(c.is_projectivity());
  EXPECT_EQ(pg::apply(c, g.pt({g.o, g.a})), g.pt({g.o, g.a * g.a}));
}

TEST(Apply, Errors) {
  Gf8 g;
  const auto id = Collineation::identity(*g.f, 3);
  EXPECT_CODE(DimensionMismatch, pg::apply(id, g.pt({g.o, g.a})));
  EXPECT_CODE(DimensionMismatch, pg::apply(id, ProjSubspace::whole(*g.f, 2)));
  EXPECT_CODE(ParameterDomain, Collineation(linalg::Matrix(*g.f, 2, 2)));
}

TEST(Collineation, PreservesIncidenceAndComposes) {
  const auto f = gf::field_create(2, 2);
  std::mt19937_64 rng(7);
  const auto elems = f->elements();
  std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
  const auto lines = pg::lines(*f, 3);
  const auto pts = pg::all_points(*f, 3);
  for (int t = 0; t < 40; ++t) {
    linalg::Matrix m(*f, 3, 3);
    do {
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) m(i, j) = elems[pick(rng)];
    } while (!linalg::inverse(m));
    const Collineation c(m, static_cast<std::uint32_t>(t % 2));
    const auto inv = c.inverse();
    EXPECT_TRUE(pg::projectively_equal(c.compose(inv), Collineation::identity(*f, 3)));
    for (const auto& l : lines) {
      const auto img = pg::apply(c, l);
      for (const auto& p : pts) ASSERT_EQ(l.contains(p), img.contains(pg::apply(c, p)));
    }
    const Collineation d(m, 1);
    for (const auto& p : pts) EXPECT_EQ(pg::apply(c.compose(d), p), pg::apply(c, pg::apply(d, p)));
  }
}

TEST(Collineation, ScalarMultiplesAreProjectivelyEqual) {
  Gf8 g;
  linalg::Matrix m = linalg::Matrix::identity(*g.f, 2);
  m(0, 1) = g.a;
  linalg::Matrix m2 = m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) m2(i, j) = m(i, j) * g.a;
  EXPECT_TRUE(pg::projectively_equal(Collineation(m), Collineation(m2)));
  EXPECT_FALSE(pg::projectively_equal(Collineation(m), Collineation::identity(*g.f, 2)));
}

TEST(Rref, RankAgreesWithIndependentElimination) {
  const auto f = gf::field_create(3, 2);
  std::mt19937_64 rng(11);
  const auto elems = f->elements();
  std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
  for (int t = 0; t < 200; ++t) {
    std::vector<linalg::Vec> rows(1 + t % 4, linalg::Vec(4, f->zero()));
    for (auto& r : rows)
      for (auto& e : r) e = (pick(rng) % 3 == 0) ? f->zero() : elems[pick(rng)];
    const auto m = linalg::Matrix::from_rows(*f, rows, 4);
    EXPECT_EQ(linalg::rank(m), oracle::rank_of(rows));
    const auto k = linalg::kernel(m);
    EXPECT_EQ(k.rows() + linalg::rank(m), 4u);
    for (std::size_t i = 0; i < k.rows(); ++i) EXPECT_TRUE(linalg::is_zero(m * k.row(i)));
  }
}
