#include "fgeom/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

namespace fgeom {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrimeCharacteristic: return "NonPrimeCharacteristic";
    case ErrorCode::ReducibleModulus: return "ReducibleModulus";
    case ErrorCode::InvalidSubfieldOrder: return "InvalidSubfieldOrder";
    case ErrorCode::MixedFields: return "MixedFields";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateFrame: return "DegenerateFrame";
    case ErrorCode::LineInExtendedHyperplane: return "LineInExtendedHyperplane";
    case ErrorCode::ZeroSubspace: return "ZeroSubspace";
    case ErrorCode::NotCollinear: return "NotCollinear";
    case ErrorCode::NotDistinct: return "NotDistinct";
    case ErrorCode::GeneralPositionViolated: return "GeneralPositionViolated";
    case ErrorCode::RankExceedsN: return "RankExceedsN";
    case ErrorCode::ParameterDomain: return "ParameterDomain";
    case ErrorCode::DegenerateLinearSet: return "DegenerateLinearSet";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::GcdIsOne: return "GcdIsOne";
    case ErrorCode::SplashesDiffer: return "SplashesDiffer";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace fgeom

namespace fgeom::gf {

namespace {

// Polynomials over GF(p) as coefficient vectors, lowest degree first.

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo monic-or-not b over GF(p); b must be nonzero.
Coeffs poly_mod(Coeffs a, const Coeffs& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  std::uint32_t lead_inv = 1;
  for (std::uint32_t t = 1; t < p; ++t) {
    if ((b.back() * t) % p == 1) lead_inv = t;
  }
  while (a.size() >= b.size()) {
    const std::uint32_t f = (a.back() * lead_inv) % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + p - (f * b[i]) % p) % p;
    }
    trim(a);
  }
  return a;
}

Coeffs decode(std::uint32_t code, std::uint32_t p, std::uint32_t k) {
  Coeffs c(k, 0);
  for (std::uint32_t i = 0; i < k; ++i) {
    c[i] = code % p;
    code /= p;
  }
  return c;
}

std::uint32_t encode(const Coeffs& c, std::uint32_t p, std::uint32_t k) {
  std::uint32_t code = 0;
  for (std::uint32_t i = k; i-- > 0;) code = code * p + (i < c.size() ? c[i] : 0);
  return code;
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

struct FieldKey {
  std::uint32_t p;
  std::uint32_t k;
  Coeffs modulus;
  auto operator<=>(const FieldKey&) const = default;
};

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

// Rank over a field of a row-major code matrix (destroys it).
std::size_t code_rank(const Field& f, std::vector<std::uint32_t>& m, std::size_t rows, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[rank * cols + j]);
    const std::uint32_t inv = f.inv(m[rank * cols + c]);
    for (std::size_t j = 0; j < cols; ++j) m[rank * cols + j] = f.mul(m[rank * cols + j], inv);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || m[i * cols + c] == 0) continue;
      const std::uint32_t factor = m[i * cols + c];
      for (std::size_t j = 0; j < cols; ++j) {
        m[i * cols + j] = f.sub(m[i * cols + j], f.mul(factor, m[rank * cols + j]));
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_irreducible(std::uint32_t p, const Coeffs& poly_in) {
  Coeffs poly = poly_in;
  trim(poly);
  if (poly.size() < 2) return false;
  const std::uint32_t k = static_cast<std::uint32_t>(poly.size() - 1);
  if (k == 1) return true;
  for (std::uint32_t d = 1; d <= k / 2; ++d) {
    const std::uint64_t count = ipow(p, d);
    for (std::uint64_t code = 0; code < count; ++code) {
      Coeffs f = decode(static_cast<std::uint32_t>(code), p, d);
      f.push_back(1);
      if (poly_mod(poly, f, p).empty()) return false;
    }
  }
  return true;
}

Field::Field(std::uint32_t p, std::uint32_t k, Coeffs modulus)
    : p_(p), k_(k), order_(static_cast<std::uint32_t>(ipow(p, k))), modulus_(std::move(modulus)) {
  // slow multiplication used only while building the log tables
  auto slow_mul = [&](std::uint32_t a, std::uint32_t b) {
    const Coeffs ca = decode(a, p_, k_);
    const Coeffs cb = decode(b, p_, k_);
    Coeffs prod(2 * k_, 0);
    for (std::uint32_t i = 0; i < k_; ++i) {
      for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
    }
    return encode(poly_mod(prod, modulus_, p_), p_, k_);
  };

  neg_.resize(order_);
  for (std::uint32_t a = 0; a < order_; ++a) {
    Coeffs c = decode(a, p_, k_);
    for (auto& x : c) x = (p_ - x) % p_;
    neg_[a] = encode(c, p_, k_);
  }
  if (p_ != 2 && order_ <= 512) {
    add_.resize(std::size_t{order_} * order_);
    for (std::uint32_t a = 0; a < order_; ++a) {
      const Coeffs ca = decode(a, p_, k_);
      for (std::uint32_t b = 0; b < order_; ++b) {
        const Coeffs cb = decode(b, p_, k_);
        Coeffs s(k_);
        for (std::uint32_t i = 0; i < k_; ++i) s[i] = (ca[i] + cb[i]) % p_;
        add_[std::size_t{a} * order_ + b] = static_cast<std::uint16_t>(encode(s, p_, k_));
      }
    }
  }

  exp_.assign(order_ - 1 == 0 ? 1 : order_ - 1, 1);
  log_.assign(order_, 0);
  if (order_ == 2) {
    primitive_ = 1;
    return;
  }
  for (std::uint32_t g = 2; g < order_; ++g) {
    std::uint32_t x = g;
    std::uint32_t ord = 1;
    while (x != 1) {
      x = slow_mul(x, g);
      ++ord;
    }
    if (ord == order_ - 1) {
      primitive_ = g;
      break;
    }
  }
  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i + 1 < order_; ++i) {
    exp_[i] = x;
    log_[x] = i;
    x = slow_mul(x, primitive_);
  }
}

FieldRef Field::make(std::uint32_t p, std::uint32_t k, std::optional<Coeffs> modulus) {
  if (!is_prime(p)) throw Error(ErrorCode::NonPrimeCharacteristic, "characteristic " + std::to_string(p) + " is not prime");
  if (k == 0) throw Error(ErrorCode::ParameterDomain, "extension degree must be positive");
  if (ipow(p, k) > kMaxOrder) throw Error(ErrorCode::ParameterDomain, "field order exceeds supported maximum");
  Coeffs mod;
  if (modulus) {
    mod = *modulus;
    for (auto& c : mod) c %= p;
    trim(mod);
    if (mod.size() != k + 1) throw Error(ErrorCode::ReducibleModulus, "modulus must have degree " + std::to_string(k));
    if (mod.back() != 1) throw Error(ErrorCode::ReducibleModulus, "modulus must be monic");
    if (!is_irreducible(p, mod)) throw Error(ErrorCode::ReducibleModulus, "modulus is reducible over GF(" + std::to_string(p) + ")");
  } else if (k == 1) {
    mod = {0, 1};
  } else {
    const std::uint64_t count = ipow(p, k);
    for (std::uint64_t code = 0; code < count; ++code) {
      Coeffs cand = decode(static_cast<std::uint32_t>(code), p, k);
      cand.push_back(1);
      if (is_irreducible(p, cand)) {
        mod = std::move(cand);
        break;
      }
    }
  }

  static std::map<FieldKey, FieldRef> registry;
  std::lock_guard lock(registry_mutex());
  FieldKey key{p, k, mod};
  if (auto it = registry.find(key); it != registry.end()) return it->second;
  FieldRef f(new Field(p, k, mod));
  registry.emplace(std::move(key), f);
  return f;
}

FieldRef field_create(std::uint32_t p, std::uint32_t k, std::optional<Coeffs> modulus) {
  return Field::make(p, k, std::move(modulus));
}

FieldElement Field::element(std::uint32_t code) const {
  if (code >= order_) throw Error(ErrorCode::ParameterDomain, "element code out of range");
  return {this, code};
}

FieldElement Field::from_coeffs(const Coeffs& c) const {
  Coeffs r = c;
  for (auto& x : r) x %= p_;
  if (r.size() > k_) r = poly_mod(r, modulus_, p_);
  return {this, encode(r, p_, k_)};
}

std::vector<FieldElement> Field::elements() const {
  std::vector<FieldElement> out;
  out.reserve(order_);
  for (std::uint32_t c = 0; c < order_; ++c) out.emplace_back(this, c);
  return out;
}

bool Field::is_subfield_order(std::uint64_t q) const {
  std::uint64_t x = 1;
  for (std::uint32_t m = 1; m <= k_; ++m) {
    x *= p_;
    if (x == q) return k_ % m == 0;
  }
  return false;
}

std::uint32_t Field::subfield_degree(std::uint64_t q) const {
  std::uint64_t x = 1;
  for (std::uint32_t m = 1; m <= k_; ++m) {
    x *= p_;
    if (x == q && k_ % m == 0) return m;
  }
  throw Error(ErrorCode::InvalidSubfieldOrder,
              std::to_string(q) + " is not a subfield order of GF(" + std::to_string(order_) + ")");
}

std::uint32_t Field::add(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  if (!add_.empty()) return add_[std::size_t{a} * order_ + b];
  std::uint32_t r = 0;
  std::uint32_t place = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return r;
}

std::uint32_t Field::neg(std::uint32_t a) const { return neg_[a]; }

std::uint32_t Field::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return exp_[(order_ - 1 - log_[a]) % (order_ - 1)];
}

std::uint32_t Field::pow(std::uint32_t a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[(std::uint64_t{log_[a]} * (e % (order_ - 1))) % (order_ - 1)];
}

std::uint32_t Field::frob(std::uint32_t a, std::uint32_t j) const {
  return pow(a, ipow(p_, j % k_));
}

namespace {

const Field& common(const FieldElement& a, const FieldElement& b) {
  if (a.field_ptr() != b.field_ptr()) throw Error(ErrorCode::MixedFields, "operands live in different fields");
  return a.field();
}

}  // namespace

FieldElement FieldElement::operator+(const FieldElement& o) const { return {field_, common(*this, o).add(code_, o.code_)}; }
FieldElement FieldElement::operator-(const FieldElement& o) const { return {field_, common(*this, o).sub(code_, o.code_)}; }
FieldElement FieldElement::operator*(const FieldElement& o) const { return {field_, common(*this, o).mul(code_, o.code_)}; }
FieldElement FieldElement::operator/(const FieldElement& o) const { return {field_, common(*this, o).mul(code_, field_->inv(o.code_))}; }
FieldElement FieldElement::operator-() const { return {field_, field_->neg(code_)}; }
FieldElement FieldElement::inverse() const { return {field_, field_->inv(code_)}; }
FieldElement FieldElement::pow(std::uint64_t e) const { return {field_, field_->pow(code_, e)}; }

Coeffs FieldElement::coefficients() const { return decode(code_, field_->characteristic(), field_->degree()); }

std::string FieldElement::to_string() const {
  std::ostringstream os;
  const Coeffs c = coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  return os.str();
}

FieldElement frobenius(const FieldElement& a, std::uint64_t q) {
  a.field().subfield_degree(q);
  return a.pow(q);
}

std::string Polynomial::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) os << ",";
    if (field->is_prime_field()) {
      os << coeffs[i].code();
    } else {
      os << "[" << coeffs[i].to_string() << "]";
    }
  }
  return os.str();
}

SubfieldEmbedding::SubfieldEmbedding(FieldRef small, FieldRef big) : small_(std::move(small)), big_(std::move(big)) {
  const Field& s = *small_;
  const Field& b = *big_;
  // root of the small modulus in the big field
  std::uint32_t root = 0;
  bool found = false;
  if (s.degree() == 1) {
    root = 1;
    found = true;
  } else {
    for (std::uint32_t c = 0; c < b.order() && !found; ++c) {
      std::uint32_t acc = 0;
      for (std::size_t i = s.modulus().size(); i-- > 0;) acc = b.add(b.mul(acc, c), s.modulus()[i]);
      if (acc == 0) {
        root = c;
        found = true;
      }
    }
  }
  if (!found) throw Error(ErrorCode::InvalidSubfieldOrder, "no subfield embedding");
  image_.resize(s.order());
  preimage_.assign(b.order(), -1);
  for (std::uint32_t code = 0; code < s.order(); ++code) {
    const Coeffs c = decode(code, s.characteristic(), s.degree());
    std::uint32_t acc = c[0];
    if (s.degree() > 1) {
      acc = 0;
      for (std::size_t i = c.size(); i-- > 0;) acc = b.add(b.mul(acc, root), c[i]);
    }
    image_[code] = acc;
    preimage_[acc] = static_cast<std::int32_t>(code);
  }
}

std::shared_ptr<const SubfieldEmbedding> SubfieldEmbedding::make(FieldRef small, FieldRef big) {
  if (small->characteristic() != big->characteristic() || big->degree() % small->degree() != 0) {
    throw Error(ErrorCode::InvalidSubfieldOrder, "GF(" + std::to_string(small->order()) + ") is not a subfield of GF(" +
                                                     std::to_string(big->order()) + ")");
  }
  static std::map<std::pair<const Field*, const Field*>, std::shared_ptr<const SubfieldEmbedding>> cache;
  static std::mutex m;
  std::lock_guard lock(m);
  auto key = std::make_pair(small.get(), big.get());
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::shared_ptr<const SubfieldEmbedding> e(new SubfieldEmbedding(small, big));
  cache.emplace(key, e);
  return e;
}

FieldElement SubfieldEmbedding::generator_image() const {
  return big_->element(image_[small_->degree() > 1 ? small_->characteristic() : 1]);
}

FieldElement SubfieldEmbedding::lift(const FieldElement& a) const {
  if (a.field_ptr() != small_.get()) throw Error(ErrorCode::MixedFields, "element is not in the embedding source");
  return big_->element(image_[a.code()]);
}

std::optional<FieldElement> SubfieldEmbedding::restrict(const FieldElement& b) const {
  if (b.field_ptr() != big_.get()) throw Error(ErrorCode::MixedFields, "element is not in the embedding target");
  const std::int32_t pre = preimage_[b.code()];
  if (pre < 0) return std::nullopt;
  return small_->element(static_cast<std::uint32_t>(pre));
}

FieldRef subfield_of(const Field& big, std::uint64_t q) {
  const std::uint32_t m = big.subfield_degree(q);
  return Field::make(big.characteristic(), m);
}

Tower::Tower(FieldRef small, FieldRef big)
    : small_(std::move(small)), big_(std::move(big)), emb_(SubfieldEmbedding::make(small_, big_)),
      n_(big_->degree() / small_->degree()) {
  const Field& b = *big_;
  const std::uint32_t qn = b.order();
  // alpha: smallest-code element of degree n over GF(q)
  std::uint32_t alpha = 1;
  if (n_ > 1) {
    for (std::uint32_t c = 2; c < qn; ++c) {
      if (degree_over_base(b.element(c)) == n_) {
        alpha = c;
        break;
      }
    }
  }
  basis_.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i) basis_.push_back(b.element(alpha).pow(i));

  // expansion table by enumerating all GF(q)-combinations of the basis
  const std::uint32_t q = small_->order();
  expand_.assign(std::size_t{qn} * n_, 0);
  std::vector<std::uint32_t> digits(n_, 0);
  for (std::uint32_t idx = 0; idx < qn; ++idx) {
    std::uint32_t t = idx;
    std::uint32_t acc = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      digits[i] = t % q;
      t /= q;
      acc = b.add(acc, b.mul(emb_->lift(small_->element(digits[i])).code(), basis_[i].code()));
    }
    for (std::uint32_t i = 0; i < n_; ++i) expand_[std::size_t{acc} * n_ + i] = digits[i];
  }
}

std::shared_ptr<const Tower> Tower::over(FieldRef big, std::uint64_t q) {
  FieldRef small = subfield_of(*big, q);
  static std::map<std::pair<const Field*, const Field*>, std::shared_ptr<const Tower>> cache;
  static std::mutex m;
  {
    std::lock_guard lock(m);
    if (auto it = cache.find({small.get(), big.get()}); it != cache.end()) return it->second;
  }
  std::shared_ptr<const Tower> t(new Tower(small, big));
  std::lock_guard lock(m);
  return cache.emplace(std::make_pair(small.get(), big.get()), t).first->second;
}

std::shared_ptr<const Tower> Tower::make(std::uint64_t q, std::uint32_t n) {
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) throw Error(ErrorCode::InvalidSubfieldOrder, "q must be a prime power");
  std::uint32_t m = 0;
  std::uint64_t x = 1;
  while (x < q) {
    x *= p;
    ++m;
  }
  if (x != q) throw Error(ErrorCode::InvalidSubfieldOrder, std::to_string(q) + " is not a prime power");
  if (n == 0) throw Error(ErrorCode::ParameterDomain, "n must be positive");
  return over(Field::make(p, m * n), q);
}

std::vector<FieldElement> Tower::expand(const FieldElement& b) const {
  if (b.field_ptr() != big_.get()) throw Error(ErrorCode::MixedFields, "element is not in the tower's extension field");
  std::vector<FieldElement> out;
  out.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i) out.push_back(small_->element(expand_[std::size_t{b.code()} * n_ + i]));
  return out;
}

FieldElement Tower::combine(std::span<const FieldElement> coords) const {
  if (coords.size() != n_) throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(n_) + " coordinates");
  FieldElement acc = big_->zero();
  for (std::uint32_t i = 0; i < n_; ++i) acc += emb_->lift(coords[i]) * basis_[i];
  return acc;
}

bool Tower::independent(std::span<const FieldElement> elems) const {
  if (elems.size() > n_) return false;
  std::vector<std::uint32_t> m;
  m.reserve(elems.size() * n_);
  for (const auto& e : elems) {
    if (e.field_ptr() != big_.get()) throw Error(ErrorCode::MixedFields, "element is not in the tower's extension field");
    for (std::uint32_t i = 0; i < n_; ++i) m.push_back(expand_[std::size_t{e.code()} * n_ + i]);
  }
  return code_rank(*small_, m, elems.size(), n_) == elems.size();
}

std::uint32_t Tower::degree_over_base(const FieldElement& z) const {
  const std::uint64_t q = small_->order();
  FieldElement x = z.pow(q);
  std::uint32_t e = 1;
  while (x != z) {
    x = x.pow(q);
    ++e;
  }
  return e;
}

Polynomial minimal_polynomial(const FieldElement& z, std::uint64_t q) {
  const Field& big = z.field();
  auto tower = Tower::over(big.ref(), q);
  // product of (x - z^(q^i)) over the distinct conjugates
  std::vector<FieldElement> prod{big.one()};
  FieldElement c = z;
  do {
    std::vector<FieldElement> next(prod.size() + 1, big.zero());
    for (std::size_t i = 0; i < prod.size(); ++i) {
      next[i + 1] += prod[i];
      next[i] -= prod[i] * c;
    }
    prod = std::move(next);
    c = c.pow(q);
  } while (c != z);
  Polynomial out{tower->base(), {}};
  for (const auto& coef : prod) {
    auto r = tower->restrict(coef);
    if (!r) throw std::logic_error("minimal polynomial coefficient outside the subfield");
    out.coeffs.push_back(*r);
  }
  return out;
}

bool independent_over_subfield(std::span<const FieldElement> elems, std::uint64_t q) {
  if (elems.empty()) return true;
  const Field& big = elems.front().field();
  auto tower = Tower::over(big.ref(), q);
  return tower->independent(elems);
}

}  // namespace fgeom::gf
