#pragma once

// Exact arithmetic in GF(p^k), subfield embeddings GF(q) -> GF(q^n) and
// expansion over a fixed GF(q)-basis of GF(q^n).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fgeom/error.hpp"

namespace fgeom::gf {

/// Polynomial over GF(p) as a coefficient list, lowest degree first.
using Coeffs = std::vector<std::uint32_t>;

class Field;
using FieldRef = std::shared_ptr<const Field>;

/// A value of some Field. Elements refer to their field by address; fields
/// are interned by `Field::make` and never destroyed, so the reference is
/// stable for the life of the process.
class FieldElement {
 public:
  FieldElement(const Field* field, std::uint32_t code) : field_(field), code_(code) {}

  const Field& field() const { return *field_; }
  const Field* field_ptr() const { return field_; }
  std::uint32_t code() const { return code_; }

  bool is_zero() const { return code_ == 0; }
  bool is_one() const { return code_ == 1; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  FieldElement inverse() const;
  FieldElement pow(std::uint64_t e) const;

  /// Coefficients over GF(p) of the polynomial-basis representation.
  Coeffs coefficients() const;
  /// Comma separated coefficient list, e.g. "0,1,1".
  std::string to_string() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.code_ == b.code_;
  }
  friend auto operator<=>(const FieldElement& a, const FieldElement& b) {
    return a.code_ <=> b.code_;
  }

 private:
  const Field* field_;
  std::uint32_t code_;
};

/// GF(p^k) = GF(p)[x]/(modulus). Elements are encoded as integers
/// sum_i c_i p^i over the residue coefficients c_i.
class Field : public std::enable_shared_from_this<Field> {
 public:
  static constexpr std::uint32_t kMaxOrder = 4096;

  /// Interned constructor. Without a modulus, the smallest irreducible monic
  /// polynomial of degree k (ordered by its integer encoding) is used.
  static FieldRef make(std::uint32_t p, std::uint32_t k,
                       std::optional<Coeffs> modulus = std::nullopt);

  FieldRef ref() const { return shared_from_this(); }
  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return k_; }
  std::uint32_t order() const { return order_; }
  const Coeffs& modulus() const { return modulus_; }
  bool is_prime_field() const { return k_ == 1; }

  FieldElement zero() const { return {this, 0}; }
  FieldElement one() const { return {this, 1}; }
  FieldElement element(std::uint32_t code) const;
  FieldElement from_coeffs(const Coeffs& c) const;
  /// A generator of the multiplicative group (smallest code).
  FieldElement primitive() const { return {this, primitive_}; }
  std::vector<FieldElement> elements() const;

  /// True iff q = p^m for some m dividing k.
  bool is_subfield_order(std::uint64_t q) const;
  /// m with q = p^m, or throws InvalidSubfieldOrder.
  std::uint32_t subfield_degree(std::uint64_t q) const;

  // Raw arithmetic on codes, no field-identity checks.
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t s = log_[a] + log_[b];
    if (s >= order_ - 1) s -= order_ - 1;
    return exp_[s];
  }
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  /// a^(p^j)
  std::uint32_t frob(std::uint32_t a, std::uint32_t j) const;

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  Field(std::uint32_t p, std::uint32_t k, Coeffs modulus);

  std::uint32_t p_;
  std::uint32_t k_;
  std::uint32_t order_;
  Coeffs modulus_;
  std::uint32_t primitive_ = 1;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint16_t> add_;  // empty when p == 2 or the table would be large
  std::vector<std::uint32_t> neg_;
};

bool is_prime(std::uint64_t n);
/// Brute-force irreducibility over GF(p): no monic factor of degree <= k/2.
bool is_irreducible(std::uint32_t p, const Coeffs& poly);

FieldRef field_create(std::uint32_t p, std::uint32_t k, std::optional<Coeffs> modulus = std::nullopt);

/// a^q; q must be the order of a subfield of a's field.
FieldElement frobenius(const FieldElement& a, std::uint64_t q);

/// Polynomial with coefficients in `field`, lowest degree first.
struct Polynomial {
  FieldRef field;
  std::vector<FieldElement> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  std::string to_string() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.field == b.field && a.coeffs == b.coeffs;
  }
};

/// Injective ring map GF(q) -> GF(q^n), fixed by the image of the generator
/// x of GF(q) (the smallest-code root of GF(q)'s modulus in GF(q^n)).
class SubfieldEmbedding {
 public:
  static std::shared_ptr<const SubfieldEmbedding> make(FieldRef small, FieldRef big);

  const FieldRef& source() const { return small_; }
  const FieldRef& target() const { return big_; }
  /// Image of the polynomial generator x of GF(q) (of 1 when GF(q) is prime).
  FieldElement generator_image() const;

  FieldElement lift(const FieldElement& a) const;
  std::optional<FieldElement> restrict(const FieldElement& b) const;
  bool contains(const FieldElement& b) const { return preimage_[b.code()] >= 0; }

 private:
  SubfieldEmbedding(FieldRef small, FieldRef big);
  FieldRef small_;
  FieldRef big_;
  std::vector<std::uint32_t> image_;
  std::vector<std::int32_t> preimage_;
};

/// GF(q) (default modulus) for a given q dividing into `big`.
FieldRef subfield_of(const Field& big, std::uint64_t q);

/// The field tower GF(q) < GF(q^n) with the fixed GF(q)-basis
/// 1, alpha, ..., alpha^(n-1), where alpha is the smallest-code element of
/// degree n over GF(q).
class Tower {
 public:
  /// Tower over the default-modulus fields GF(q) and GF(q^n).
  static std::shared_ptr<const Tower> make(std::uint64_t q, std::uint32_t n);
  /// Tower of an existing field over its subfield of order q.
  static std::shared_ptr<const Tower> over(FieldRef big, std::uint64_t q);

  std::uint64_t q() const { return small_->order(); }
  std::uint32_t n() const { return n_; }
  const FieldRef& base() const { return small_; }
  const FieldRef& ext() const { return big_; }
  const SubfieldEmbedding& embedding() const { return *emb_; }
  FieldElement alpha() const { return basis_[n_ > 1 ? 1 : 0]; }
  const std::vector<FieldElement>& basis() const { return basis_; }

  FieldElement lift(const FieldElement& a) const { return emb_->lift(a); }
  std::optional<FieldElement> restrict(const FieldElement& b) const { return emb_->restrict(b); }
  bool in_base(const FieldElement& b) const { return emb_->contains(b); }

  /// Coordinates of b over the basis, each in GF(q).
  std::vector<FieldElement> expand(const FieldElement& b) const;
  FieldElement combine(std::span<const FieldElement> coords) const;
  /// GF(q)-linear independence via rank of the expansion matrix.
  bool independent(std::span<const FieldElement> elems) const;
  /// Degree of the minimal polynomial of z over GF(q).
  std::uint32_t degree_over_base(const FieldElement& z) const;

 private:
  Tower(FieldRef small, FieldRef big);
  FieldRef small_;
  FieldRef big_;
  std::shared_ptr<const SubfieldEmbedding> emb_;
  std::uint32_t n_;
  std::vector<FieldElement> basis_;
  std::vector<std::uint32_t> expand_;  // big code -> n small codes, row-major
};

/// Monic minimal polynomial of z over the subfield GF(q).
Polynomial minimal_polynomial(const FieldElement& z, std::uint64_t q);

bool independent_over_subfield(std::span<const FieldElement> elems, std::uint64_t q);

}  // namespace fgeom::gf

template <>
struct std::hash<fgeom::gf::FieldElement> {
  std::size_t operator()(const fgeom::gf::FieldElement& a) const noexcept {
    return std::hash<const void*>()(a.field_ptr()) ^ (std::size_t{a.code()} * 0x9e3779b97f4a7c15ull);
  }
};
