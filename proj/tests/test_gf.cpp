#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fgeom/gf.hpp"
#include "fgeom/linalg.hpp"
#include "oracle.hpp"

using namespace fgeom;
using gf::Coeffs;
using gf::Field;
using gf::FieldElement;

namespace {

// Irreducibility by trial of every value: fine for degree <= 3.
bool has_root(std::uint32_t p, const Coeffs& poly) {
  for (std::uint32_t x = 0; x < p; ++x) {
    std::uint64_t acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = (acc * x + *it) % p;
    if (acc == 0) return true;
  }
  return false;
}

}  // namespace

TEST(FieldCreate, PrimeFieldHasModulusX) {
  const auto f = gf::field_create(2, 1);
  EXPECT_EQ(f->order(), 2u);
  EXPECT_EQ(f->modulus(), (Coeffs{0, 1}));
}

TEST(FieldCreate, Gf8FromXCubedPlusXPlusOne) {
  ASSERT_FALSE(has_root(2, {1, 1, 0, 1}));
  const auto f = gf::field_create(2, 3, Coeffs{1, 1, 0, 1});
  EXPECT_EQ(f->order(), 8u);
  EXPECT_EQ(f->modulus(), (Coeffs{1, 1, 0, 1}));
}

TEST(FieldCreate, Gf9FromXSquaredPlusOne) {
  ASSERT_FALSE(has_root(3, {1, 0, 1}));
  const auto f = gf::field_create(3, 2, Coeffs{1, 0, 1});
  EXPECT_EQ(f->order(), 9u);
}

TEST(FieldCreate, DefaultModulusIsSmallestIrreducible) {
  // Smallest monic irreducible cubic over GF(2) by integer encoding is x^3 + x + 1.
  EXPECT_EQ(gf::field_create(2, 3)->modulus(), (Coeffs{1, 1, 0, 1}));
  EXPECT_EQ(gf::field_create(2, 2)->modulus(), (Coeffs{1, 1, 1}));
  // Over GF(3), x^2 + 1 encodes to 10, below x^2 + x + 2 (17) and x^2 + 2x + 2 (23).
  EXPECT_EQ(gf::field_create(3, 2)->modulus(), (Coeffs{1, 0, 1}));
}

TEST(FieldCreate, Errors) {
  try {
    gf::field_create(4, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPrimeCharacteristic);
  }
  try {
    gf::field_create(2, 2, Coeffs{1, 0, 1});  // (x + 1)^2
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ReducibleModulus);
  }
}

TEST(FieldCreate, InternedByParameters) {
  EXPECT_EQ(gf::field_create(2, 4).get(), gf::field_create(2, 4).get());
}

TEST(FieldArithmetic, MatchesSchoolbookProducts) {
  for (auto [p, k] : {std::pair{2u, 3u}, {2u, 4u}, {3u, 2u}, {3u, 3u}, {5u, 2u}, {2u, 6u}}) {
    const auto f = gf::field_create(p, k);
    for (const auto& a : f->elements()) {
      for (const auto& b : f->elements()) {
        const Coeffs want = oracle::poly_mul(oracle::padded(a.coefficients(), k), oracle::padded(b.coefficients(), k),
                                             p, f->modulus());
        ASSERT_EQ(oracle::padded((a * b).coefficients(), k), want) << a.to_string() << " * " << b.to_string();
      }
    }
  }
}

TEST(FieldArithmetic, InversesAndDivision) {
  for (auto [p, k] : {std::pair{2u, 5u}, {3u, 3u}, {7u, 2u}}) {
    const auto f = gf::field_create(p, k);
    for (const auto& a : f->elements()) {
      if (a.is_zero()) continue;
      EXPECT_TRUE((a * a.inverse()).is_one());
      EXPECT_EQ(f->one() / a, a.inverse());
      EXPECT_TRUE((a - a).is_zero());
      EXPECT_TRUE((a + (-a)).is_zero());
    }
  }
}

TEST(FieldArithmetic, MixedFieldsRejected) {
  const auto a = gf::field_create(2, 3)->one();
  const auto b = gf::field_create(2, 2)->one();
  try {
    (void)(a + b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MixedFields);
  }
}

TEST(FieldElementText, CoefficientList) {
  const auto f = gf::field_create(2, 3);
  EXPECT_EQ(f->one().to_string(), "1,0,0");
  EXPECT_EQ(f->from_coeffs({0, 1, 1}).to_string(), "0,1,1");
}

TEST(Frobenius, OneIsFixed) {
  const auto f = gf::field_create(2, 4);
  EXPECT_TRUE(gf::frobenius(f->one(), 2).is_one());
  EXPECT_TRUE(gf::frobenius(f->one(), 4).is_one());
}

TEST(Frobenius, Gf4GeneratorGoesToItsConjugate) {
  const auto f = gf::field_create(2, 2, Coeffs{1, 1, 1});
  const auto zeta = f->from_coeffs({0, 1});
  EXPECT_EQ(gf::frobenius(zeta, 2), zeta + f->one());
}

TEST(Frobenius, OrderOfGaloisGroup) {
  for (auto [p, k, q, n] : {std::tuple{2u, 6u, 4u, 3u}, {2u, 6u, 2u, 6u}, {3u, 2u, 3u, 2u}, {2u, 4u, 4u, 2u}}) {
    const auto f = gf::field_create(p, k);
    for (const auto& a : f->elements()) {
      auto b = a;
      for (std::uint32_t i = 0; i < n; ++i) b = gf::frobenius(b, q);
      EXPECT_EQ(b, a);
    }
  }
}

TEST(Frobenius, InvalidSubfieldOrder) {
  const auto f = gf::field_create(2, 3);
  try {
    (void)gf::frobenius(f->one(), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSubfieldOrder);
  }
}

TEST(Frobenius, AdditiveAndMultiplicativeUpTo256) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    for (std::uint32_t k = 1; std::pow(p, k) <= 256; ++k) {
      const auto f = gf::field_create(p, k);
      for (std::uint32_t m = 1; m <= k; ++m) {
        if (k % m != 0) continue;
        const std::uint64_t q = static_cast<std::uint64_t>(std::pow(p, m));
        const auto elems = f->elements();
        for (const auto& a : elems) {
          for (const auto& b : elems) {
            ASSERT_EQ(gf::frobenius(a + b, q), gf::frobenius(a, q) + gf::frobenius(b, q));
            ASSERT_EQ(gf::frobenius(a * b, q), gf::frobenius(a, q) * gf::frobenius(b, q));
          }
        }
      }
    }
  }
}

TEST(Frobenius, FixedPointsAreTheSubfield) {
  const auto tower = gf::Tower::make(4, 3);
  const auto& f = *tower->ext();
  std::size_t fixed = 0;
  for (const auto& a : f.elements()) {
    const bool is_fixed = gf::frobenius(a, 4) == a;
    EXPECT_EQ(is_fixed, tower->in_base(a));
    fixed += is_fixed;
  }
  EXPECT_EQ(fixed, 4u);
}

TEST(MinimalPolynomial, OfZeroIsX) {
  const auto f = gf::field_create(3, 2);
  const auto m = gf::minimal_polynomial(f->zero(), 3);
  ASSERT_EQ(m.degree(), 1);
  EXPECT_TRUE(m.coeffs[0].is_zero());
  EXPECT_TRUE(m.coeffs[1].is_one());
}

TEST(MinimalPolynomial, Gf4OverGf2IsTheOnlyIrreducibleQuadratic) {
  const auto f = gf::field_create(2, 2);
  const auto zeta = f->from_coeffs({0, 1});
  const auto m = gf::minimal_polynomial(zeta, 2);
  ASSERT_EQ(m.degree(), 2);
  for (const auto& c : m.coeffs) EXPECT_TRUE(c.is_one());
  EXPECT_EQ(m.field->order(), 2u);
}

TEST(MinimalPolynomial, GeneratorOfGf8HasDegreeThree) {
  const auto f = gf::field_create(2, 3);
  const auto m = gf::minimal_polynomial(f->primitive(), 2);
  EXPECT_EQ(m.degree(), 3);
  Coeffs c;
  for (const auto& e : m.coeffs) c.push_back(e.code());
  EXPECT_TRUE(gf::is_irreducible(2, c));
}

TEST(MinimalPolynomial, DegreeDividesNAndRootVanishes) {
  for (auto [q, n] : {std::pair{2ull, 6u}, {3ull, 4u}, {4ull, 3u}, {2ull, 4u}, {5ull, 2u}}) {
    const auto tower = gf::Tower::make(q, n);
    for (const auto& z : tower->ext()->elements()) {
      const auto m = gf::minimal_polynomial(z, q);
      ASSERT_EQ(n % static_cast<std::uint32_t>(m.degree()), 0u);
      ASSERT_TRUE(m.coeffs.back().is_one());
      ASSERT_EQ(m.field.get(), tower->base().get());
      auto acc = tower->ext()->zero();
      for (auto it = m.coeffs.rbegin(); it != m.coeffs.rend(); ++it) acc = acc * z + tower->lift(*it);
      ASSERT_TRUE(acc.is_zero());
      EXPECT_EQ(static_cast<std::uint32_t>(m.degree()), tower->degree_over_base(z));
    }
  }
}

TEST(Independence, SingleOne) {
  const auto f = gf::field_create(2, 3);
  const std::vector e{f->one()};
  EXPECT_TRUE(gf::independent_over_subfield(e, 2));
}

TEST(Independence, Gf4ThirdIsSumOfFirstTwo) {
  const auto f = gf::field_create(2, 2);
  const auto z = f->from_coeffs({0, 1});
  const std::vector e{f->one(), z, z + f->one()};
  EXPECT_FALSE(gf::independent_over_subfield(e, 2));
}

TEST(Independence, PolynomialBasisOfGf8) {
  const auto f = gf::field_create(2, 3, Coeffs{1, 1, 0, 1});
  const auto a = f->from_coeffs({0, 1});
  const std::vector e{f->one(), a, a * a};
  EXPECT_TRUE(gf::independent_over_subfield(e, 2));
}

TEST(Embedding, ClosedAndFixedByFrobenius) {
  const auto tower = gf::Tower::make(4, 2);
  const auto& emb = tower->embedding();
  for (const auto& a : tower->base()->elements()) {
    for (const auto& b : tower->base()->elements()) {
      EXPECT_EQ(emb.lift(a + b), emb.lift(a) + emb.lift(b));
      EXPECT_EQ(emb.lift(a * b), emb.lift(a) * emb.lift(b));
    }
    EXPECT_EQ(emb.restrict(emb.lift(a)), a);
    EXPECT_EQ(gf::frobenius(emb.lift(a), 4), emb.lift(a));
  }
}

TEST(Tower, ExpandCombineRoundTrip) {
  const auto tower = gf::Tower::make(3, 3);
  for (const auto& b : tower->ext()->elements()) {
    const auto c = tower->expand(b);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(tower->combine(c), b);
  }
}

// The r-1 conjugate vectors (x_i^(q^j))_i, j = 0..r-2, are GF(q^n)-independent
// exactly when the x_i are GF(q)-independent.
TEST(Independence, MooreDualityExhaustive) {
  for (std::uint64_t q : {2ull, 3ull}) {
    for (std::uint32_t n = 2; n <= 4; ++n) {
      const auto tower = gf::Tower::make(q, n);
      const auto elems = tower->ext()->elements();
      for (std::size_t m = 1; m <= std::min<std::size_t>(3, n + 1); ++m) {
        if (std::pow(elems.size(), m) > 200000) continue;
        std::vector<std::size_t> idx(m, 0);
        while (true) {
          std::vector<FieldElement> xs;
          for (auto i : idx) xs.push_back(elems[i]);
          std::vector<linalg::Vec> rows;
          for (std::size_t j = 0; j < m; ++j) {
            linalg::Vec row;
            for (const auto& x : xs) row.push_back(x.pow(static_cast<std::uint64_t>(std::pow(q, j))));
            rows.push_back(row);
          }
          ASSERT_EQ(tower->independent(xs), oracle::rank_of(rows) == m);
          std::size_t k = 0;
          while (k < m && ++idx[k] == elems.size()) idx[k++] = 0;
          if (k == m) break;
        }
      }
    }
  }
}

TEST(Tower, BasisIsPowersOfAlpha) {
  const auto tower = gf::Tower::make(2, 4);
  ASSERT_EQ(tower->basis().size(), 4u);
  EXPECT_TRUE(tower->basis()[0].is_one());
  for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(tower->basis()[i], tower->alpha().pow(i));
  EXPECT_EQ(tower->degree_over_base(tower->alpha()), 4u);
}
