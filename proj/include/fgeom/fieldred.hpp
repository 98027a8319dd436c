#pragma once

// Field reduction PG(r-1, q^n) -> PG(rn-1, q), the Desarguesian spread, the
// B operator and F_q-linear sets.

#include <map>
#include <optional>
#include <vector>

#include "fgeom/projgeom.hpp"

namespace fgeom::fieldred {

using TowerRef = std::shared_ptr<const gf::Tower>;
using gf::FieldElement;
using linalg::Matrix;
using linalg::Vec;
using pg::ProjPoint;
using pg::ProjSubspace;

/// Expansion GF(q^n)^r -> GF(q)^(rn) over the tower's basis 1, alpha, ...;
/// coordinate i occupies entries [i*n, (i+1)*n).
class ReductionContext {
 public:
  ReductionContext(TowerRef tower, std::size_t r);

  std::size_t r() const { return r_; }
  std::uint32_t n() const { return tower_->n(); }
  std::uint64_t q() const { return tower_->q(); }
  const gf::Tower& tower() const { return *tower_; }
  const TowerRef& tower_ref() const { return tower_; }
  const gf::Field& base() const { return *tower_->base(); }
  const gf::Field& ext() const { return *tower_->ext(); }
  std::size_t reduced_len() const { return r_ * tower_->n(); }

  Vec expand(std::span<const FieldElement> v) const;
  Vec contract(std::span<const FieldElement> y) const;
  /// The point of PG(r-1, q^n) whose spread element contains y.
  ProjPoint contract_point(const ProjPoint& y) const { return ProjPoint(contract(y.coords())); }

 private:
  TowerRef tower_;
  std::size_t r_;
};

struct SpreadElement {
  ProjSubspace subspace;  // (n-1)-dimensional, over GF(q)
  ProjPoint point;        // represented point of PG(r-1, q^n)
};

SpreadElement field_reduce_point(const ReductionContext& ctx, const ProjPoint& x);
std::vector<SpreadElement> desarguesian_spread(const ReductionContext& ctx);

/// Points whose spread elements meet T; sorted.
std::vector<ProjPoint> b_operator(const ReductionContext& ctx, std::span<const ProjPoint> t);
std::vector<ProjPoint> b_operator(const ReductionContext& ctx, const ProjSubspace& t);

/// B(U) for a GF(q)-subspace U of GF(q^n)^r. Rank and weights are
/// vector-space dimensions: rank = dim U, weight(x) = dim(F(x) meet U).
struct LinearSet {
  ProjSubspace subspace;
  int rank = 0;
  std::vector<ProjPoint> points;  // sorted
  std::vector<int> weights;       // parallel to points

  std::optional<int> weight(const ProjPoint& x) const;
  bool contains(const ProjPoint& x) const { return weight(x).has_value(); }

  /// Equality of point sets with weights; the defining subspace is provenance.
  friend bool operator==(const LinearSet& a, const LinearSet& b) {
    return a.points == b.points && a.weights == b.weights;
  }
};

LinearSet linear_set(const ReductionContext& ctx, const ProjSubspace& u);
/// Linear set of the GF(q)-span of vectors of GF(q^n)^r.
LinearSet linear_set_of_span(const ReductionContext& ctx, std::span<const Vec> vectors);
/// GF(q)-subspace of PG(rn-1, q) spanned by the expansions of the vectors.
ProjSubspace reduced_span(const ReductionContext& ctx, std::span<const Vec> vectors);
/// A GF(q)-basis of U read back in GF(q^n)^r.
std::vector<Vec> contracted_basis(const ReductionContext& ctx, const ProjSubspace& u);

enum class LinearSetKind { Scattered, Club, Subline, Other };

struct Classification {
  LinearSetKind kind;
  std::optional<ProjPoint> head;  // club only
  std::vector<int> profile;       // weights, descending
};

Classification classify_linear_set(const LinearSet& l);

std::string to_string(LinearSetKind k);

}  // namespace fgeom::fieldred
