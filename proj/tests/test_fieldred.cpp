#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fgeom/fieldred.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace fgeom;
using fieldred::LinearSetKind;
using fieldred::ReductionContext;
using linalg::Vec;
using pg::ProjPoint;
using pg::ProjSubspace;

namespace {

ProjSubspace random_subspace(const ReductionContext& ctx, std::size_t k, std::mt19937_64& rng) {
  const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), k);
  std::uniform_int_distribution<std::uint64_t> pick(0, e.size() - 1);
  return ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(pick(rng)));
}

void expect_matches_brute(const ReductionContext& ctx, const ProjSubspace& u) {
  const auto ls = fieldred::linear_set(ctx, u);
  const auto brute = oracle::brute_linear_set(ctx.tower(), fieldred::contracted_basis(ctx, u));
  ASSERT_EQ(ls.points, oracle::keys(brute));
  for (std::size_t i = 0; i < ls.points.size(); ++i) EXPECT_EQ(ls.weights[i], brute.weights.at(ls.points[i]));
  EXPECT_EQ(static_cast<std::size_t>(ls.rank), brute.dim);
}

}  // namespace

TEST(ReductionContext, ExpandContractRoundTripAndLinearity) {
  const auto tower = gf::Tower::make(3, 2);
  const ReductionContext ctx(tower, 2);
  const auto& f = *tower->ext();
  for (const auto& a : f.elements()) {
    for (const auto& b : f.elements()) {
      const Vec v{a, b};
      const auto y = ctx.expand(v);
      ASSERT_EQ(y.size(), 4u);
      EXPECT_EQ(ctx.contract(y), v);
      const Vec w{b, a};
      EXPECT_EQ(ctx.expand(linalg::add(v, w)), linalg::add(y, ctx.expand(w)));
    }
  }
  EXPECT_CODE(DimensionMismatch, ctx.expand(Vec{f.one()}));
}

TEST(FieldReducePoint, CoordinateBlockForE1) {
  const auto tower = gf::Tower::make(2, 2);
  const ReductionContext ctx(tower, 2);
  const auto& f = *tower->ext();
  const auto el = fieldred::field_reduce_point(ctx, ProjPoint({f.one(), f.zero()}));
  const auto& b = el.subspace.basis();
  ASSERT_EQ(b.rows(), 2u);
  const auto& g = *tower->base();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(b(i, j), i == j ? g.one() : g.zero());
}

TEST(FieldReducePoint, RepresentativeInvariance) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 3);
  const auto& f = *tower->ext();
  for (const auto& x : pg::all_points(f, 3)) {
    const auto el = fieldred::field_reduce_point(ctx, x);
    EXPECT_EQ(el.subspace.dim(), 2);
    EXPECT_EQ(el.point, x);
    for (const auto& lam : f.elements()) {
      if (lam.is_zero()) continue;
      const Vec v = linalg::scale(lam, x.coords());
      const auto y = ctx.expand(v);
      EXPECT_TRUE(el.subspace.contains(y));
    }
  }
}

TEST(FieldReducePoint, NinePairwiseDisjointPlanesForPG18) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 2);
  std::vector<fieldred::SpreadElement> els;
  for (const auto& x : pg::all_points(*tower->ext(), 2)) els.push_back(fieldred::field_reduce_point(ctx, x));
  ASSERT_EQ(els.size(), 9u);
  for (std::size_t i = 0; i < els.size(); ++i) {
    EXPECT_EQ(els[i].subspace.dim(), 2);
    for (std::size_t j = i + 1; j < els.size(); ++j) EXPECT_EQ(pg::meet(els[i].subspace, els[j].subspace).dim(), -1);
  }
}

TEST(DesarguesianSpread, SizesAndPartition) {
  for (auto [q, n, r, count] : {std::tuple{2ull, 3u, 2u, 9u}, {3ull, 2u, 2u, 10u}, {2ull, 2u, 3u, 21u}}) {
    const auto tower = gf::Tower::make(q, n);
    const ReductionContext ctx(tower, r);
    const auto spread = fieldred::desarguesian_spread(ctx);
    ASSERT_EQ(spread.size(), count);
    std::map<ProjPoint, int> cover;
    for (const auto& el : spread) pg::for_each_point(el.subspace, [&](const ProjPoint& y) { ++cover[y]; });
    EXPECT_EQ(cover.size(), pg::theta(q, static_cast<int>(r * n)));
    for (const auto& [y, c] : cover) EXPECT_EQ(c, 1);
    EXPECT_EQ(count * pg::theta(q, static_cast<int>(n)), cover.size());
  }
}

TEST(BOperator, OneElementAndEverything) {
  const auto tower = gf::Tower::make(2, 2);
  const ReductionContext ctx(tower, 3);
  const auto& f = *tower->ext();
  const ProjPoint x({f.one(), tower->alpha(), f.zero()});
  EXPECT_EQ(fieldred::b_operator(ctx, fieldred::field_reduce_point(ctx, x).subspace), std::vector<ProjPoint>{x});
  auto all = pg::all_points(f, 3);
  std::sort(all.begin(), all.end());
  EXPECT_EQ(fieldred::b_operator(ctx, ProjSubspace::whole(ctx.base(), ctx.reduced_len())), all);
}

TEST(BOperator, RoundTripThroughFieldReductionUpTo16) {
  for (auto [q, n] : {std::pair{2ull, 2u}, {2ull, 3u}, {2ull, 4u}, {3ull, 2u}, {4ull, 2u}}) {
    for (std::size_t r : {2u, 3u}) {
      const auto tower = gf::Tower::make(q, n);
      const ReductionContext ctx(tower, r);
      for (const auto& x : pg::all_points(*tower->ext(), r)) {
        ASSERT_EQ(fieldred::b_operator(ctx, fieldred::field_reduce_point(ctx, x).subspace), std::vector<ProjPoint>{x});
      }
    }
  }
}

TEST(BOperator, LineOffTheSpreadGivesASubline) {
  for (auto [q, n] : {std::pair{2ull, 2u}, {2ull, 3u}, {3ull, 2u}, {3ull, 3u}}) {
    const auto tower = gf::Tower::make(q, n);
    const ReductionContext ctx(tower, 2);
    const auto spread = fieldred::desarguesian_spread(ctx);
    const pg::SubspaceEnumerator lines(ctx.base(), ctx.reduced_len(), 2);
    std::size_t tested = 0;
    for (std::uint64_t i = 0; i < lines.size() && tested < 300; i += 1 + lines.size() / 600) {
      const ProjSubspace l(ctx.base(), ctx.reduced_len(), lines.at(i));
      bool inside = false;
      for (const auto& el : spread) inside = inside || el.subspace.contains(l);
      if (inside) continue;
      ++tested;
      const auto b = fieldred::b_operator(ctx, l);
      ASSERT_EQ(b.size(), q + 1);
      const auto ls = fieldred::linear_set(ctx, l);
      EXPECT_EQ(fieldred::classify_linear_set(ls).kind, LinearSetKind::Subline);
    }
    EXPECT_GT(tested, 0u);
  }
}

TEST(LinearSet, CanonicalSublineOfPG18) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 2);
  const auto& f = *tower->ext();
  const std::vector<Vec> gens{{f.one(), f.zero()}, {f.zero(), f.one()}};
  const auto ls = fieldred::linear_set_of_span(ctx, gens);
  EXPECT_EQ(ls.rank, 2);
  ASSERT_EQ(ls.points.size(), 3u);
  for (int w : ls.weights) EXPECT_EQ(w, 1);
  EXPECT_EQ(fieldred::classify_linear_set(ls).kind, LinearSetKind::Subline);
}

TEST(LinearSet, SpreadElementIsOnePointOfWeightN) {
  const auto tower = gf::Tower::make(3, 2);
  const ReductionContext ctx(tower, 2);
  const auto& f = *tower->ext();
  const ProjPoint x({f.one(), tower->alpha()});
  const auto ls = fieldred::linear_set(ctx, fieldred::field_reduce_point(ctx, x).subspace);
  EXPECT_EQ(ls.rank, 2);
  EXPECT_EQ(ls.points, std::vector<ProjPoint>{x});
  EXPECT_EQ(ls.weights, std::vector<int>{2});
  EXPECT_EQ(ls.weight(x), 2);
  EXPECT_FALSE(ls.contains(ProjPoint({f.one(), f.zero()})));
}

TEST(LinearSet, ClubUAlphaUV) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 2);
  const auto& f = *tower->ext();
  const auto a = f.primitive();
  const Vec u{f.one(), f.zero()};
  const Vec v{f.zero(), f.one()};
  const std::vector<Vec> gens{u, linalg::scale(a, u), v};
  const auto ls = fieldred::linear_set_of_span(ctx, gens);
  // oracle: walk the 7 nonzero vectors of U
  const auto brute = oracle::brute_linear_set(*tower, gens);
  EXPECT_EQ(ls.points, oracle::keys(brute));
  EXPECT_EQ(ls.rank, 3);
  ASSERT_EQ(ls.points.size(), 5u);
  const ProjPoint head({f.one(), f.zero()});
  EXPECT_EQ(ls.weight(head), 2);
  for (std::size_t i = 0; i < ls.points.size(); ++i) {
    if (ls.points[i] != head) {
      EXPECT_EQ(ls.weights[i], 1);
    }
  }
  const auto c = fieldred::classify_linear_set(ls);
  EXPECT_EQ(c.kind, LinearSetKind::Club);
  EXPECT_EQ(c.head, head);
  EXPECT_EQ(c.profile, (std::vector<int>{2, 1, 1, 1, 1}));
}

TEST(LinearSet, ScatteredRankThreeHasQSquaredPlusQPlusOnePoints) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 2);
  const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), 3);
  std::size_t scattered = 0;
  for (std::uint64_t i = 0; i < e.size(); ++i) {
    const auto ls = fieldred::linear_set(ctx, ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(i)));
    const auto c = fieldred::classify_linear_set(ls);
    if (c.kind == LinearSetKind::Scattered) {
      ++scattered;
      EXPECT_EQ(ls.points.size(), 7u);
    }
  }
  EXPECT_GT(scattered, 0u);
}

TEST(LinearSet, MatchesBruteForceOnRandomSubspaces) {
  std::mt19937_64 rng(21);
  for (auto [q, n] : {std::pair{2ull, 3u}, {3ull, 2u}, {2ull, 4u}, {3ull, 3u}, {4ull, 2u}}) {
    const auto tower = gf::Tower::make(q, n);
    const ReductionContext ctx(tower, 2);
    for (std::size_t k = 1; k <= std::min<std::size_t>(4, 2 * n); ++k) {
      for (int t = 0; t < 10; ++t) expect_matches_brute(ctx, random_subspace(ctx, k, rng));
    }
  }
}

TEST(LinearSet, WeightIdentityEverySubspaceOfGf8Squared) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 2);
  for (std::size_t k = 1; k <= 6; ++k) {
    const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), k);
    for (std::uint64_t i = 0; i < e.size(); ++i) {
      const auto ls = fieldred::linear_set(ctx, ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(i)));
      std::uint64_t sum = 0;
      for (int w : ls.weights) {
        ASSERT_GE(w, 1);
        ASSERT_LE(w, ls.rank);
        sum += pg::theta(2, w);
      }
      ASSERT_EQ(sum, pg::theta(2, ls.rank));
    }
  }
}

TEST(LinearSet, ClubSizeIsQToTheRMinusOnePlusOne) {
  for (std::uint64_t q : {2ull, 3ull}) {
    const auto tower = gf::Tower::make(q, 3);
    const ReductionContext ctx(tower, 2);
    const pg::SubspaceEnumerator e(ctx.base(), ctx.reduced_len(), 3);
    std::size_t clubs = 0;
    for (std::uint64_t i = 0; i < e.size(); ++i) {
      const auto ls = fieldred::linear_set(ctx, ProjSubspace(ctx.base(), ctx.reduced_len(), e.at(i)));
      if (fieldred::classify_linear_set(ls).kind != LinearSetKind::Club) continue;
      ++clubs;
      ASSERT_EQ(ls.points.size(), q * q + 1);
    }
    EXPECT_GT(clubs, 0u);
  }
}

TEST(LinearSet, Errors) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 2);
  EXPECT_CODE(ZeroSubspace, fieldred::linear_set(ctx, ProjSubspace::empty(ctx.base(), 6)));
  EXPECT_CODE(AmbientMismatch, fieldred::linear_set(ctx, ProjSubspace::whole(ctx.base(), 4)));
}

TEST(LinearSet, EqualityIgnoresTheDefiningSubspace) {
  const auto tower = gf::Tower::make(2, 3);
  const ReductionContext ctx(tower, 2);
  const auto& f = *tower->ext();
  const auto a = tower->alpha();
  // <(1,0), (0,1)> and <(a,0), (0,a)> are different subspaces with the same set
  const std::vector<Vec> g1{{f.one(), f.zero()}, {f.zero(), f.one()}};
  const std::vector<Vec> g2{{a, f.zero()}, {f.zero(), a}};
  const auto l1 = fieldred::linear_set_of_span(ctx, g1);
  const auto l2 = fieldred::linear_set_of_span(ctx, g2);
  EXPECT_NE(l1.subspace, l2.subspace);
  EXPECT_EQ(l1, l2);
}

TEST(Classification, OtherProfile) {
  const auto tower = gf::Tower::make(2, 4);
  const ReductionContext ctx(tower, 2);
  const auto& f = *tower->ext();
  const auto a = tower->alpha();
  // two points of weight 2: <u, a u, v, a v>
  const Vec u{f.one(), f.zero()};
  const Vec v{f.zero(), f.one()};
  const std::vector<Vec> gens{u, linalg::scale(a, u), v, linalg::scale(a, v)};
  const auto c = fieldred::classify_linear_set(fieldred::linear_set_of_span(ctx, gens));
  EXPECT_EQ(c.kind, LinearSetKind::Other);
  EXPECT_EQ(c.profile[0], 2);
  EXPECT_EQ(c.profile[1], 2);
  EXPECT_EQ(fieldred::to_string(c.kind), "other");
}
