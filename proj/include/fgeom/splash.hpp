#pragma once

// Splashes of subgeometries on lines, sublines, the club characterization,
// tangent-splash construction and counting.

#include <array>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fgeom/fieldred.hpp"
#include "fgeom/subgeo.hpp"

namespace fgeom::splash {

using BigInt = boost::multiprecision::cpp_int;
using TowerRef = std::shared_ptr<const gf::Tower>;
using gf::FieldElement;
using linalg::Matrix;
using linalg::Vec;
using pg::ProjPoint;
using pg::ProjSubspace;

enum class SplashKind { Tangent, External, Secant };
std::string to_string(SplashKind k);

/// Coordinates on a line: (lambda : mu) <-> lambda * a + mu * b.
class LineFrame {
 public:
  LineFrame(Vec a, Vec b);
  /// The frame given by the RREF basis rows of a line.
  static LineFrame of_line(const ProjSubspace& line);

  const Vec& a() const { return a_; }
  const Vec& b() const { return b_; }
  std::size_t ambient_len() const { return a_.size(); }
  ProjSubspace line() const;

  Vec to_ambient(std::span<const FieldElement> coords) const;
  ProjPoint to_ambient(const ProjPoint& coords) const { return ProjPoint(to_ambient(coords.coords())); }
  /// Throws NotCollinear for vectors off the line.
  Vec to_line(std::span<const FieldElement> v) const;
  ProjPoint to_line(const ProjPoint& p) const { return ProjPoint(to_line(p.coords())); }

 private:
  Vec a_;
  Vec b_;
  Matrix cols_;
};

struct Splash {
  ProjSubspace line;                   // the line carrying the points, in their coordinates
  std::vector<ProjPoint> points;       // sorted
  std::vector<int> hyperplane_counts;  // parallel to points; empty when synthetic
  SplashKind kind = SplashKind::External;
  std::optional<ProjPoint> centre;
  int rank = 0;
  std::optional<subgeo::Subgeometry> origin;         // nullopt: synthetic
  std::optional<LineFrame> origin_frame;             // set when points are line coordinates of origin's line
  std::optional<fieldred::LinearSet> defining_set;   // for synthetic splashes

  bool contains(const ProjPoint& p) const;
  std::optional<int> hyperplane_count(const ProjPoint& p) const;
  bool synthetic() const { return !origin.has_value(); }
};

/// Meets of the line with the extensions of all hyperplanes of pi0.
Splash compute_splash(const subgeo::Subgeometry& pi0, const ProjSubspace& line);
/// The same splash with points expressed in a frame of its line.
Splash in_frame(const Splash& s, const LineFrame& frame);

struct Subline {
  std::array<ProjPoint, 3> defining;
  std::vector<ProjPoint> points;  // sorted, q + 1 of them
  ProjSubspace transversal;       // line of PG(mn-1, q) with B(transversal) = points
};

/// subl_q(P1, P2, P3) = {<v + lambda t> : lambda in GF(q)} u {<t>} where
/// P1 = <t>, P2 = <v>, P3 = <v + t>.
Subline subline_through(const gf::Tower& tower, const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3);

/// For every pair P != Q in A, subl(T, P, Q) lies in T u A. Points on one line.
bool closure_test(const gf::Tower& tower, const ProjPoint& t, std::span<const ProjPoint> a);
/// Smallest superset of `start` (which contains t) closed under
/// X -> X u subl(t, P, Q); nullopt once it would exceed `limit` points.
std::optional<std::vector<ProjPoint>> subline_closure(const gf::Tower& tower, const ProjPoint& t,
                                                      std::vector<ProjPoint> start, std::size_t limit);
/// Every closed subset of PG(1, q^n) containing t with at most `limit` points.
std::vector<std::vector<ProjPoint>> enumerate_closed_sets(const gf::Tower& tower, const ProjPoint& t, std::size_t limit);

struct LinearRepresentation {
  LineFrame frame;            // frame of the splash's line used for coordinates
  fieldred::LinearSet set;    // in frame coordinates, B(set.subspace) = splash
};

/// A rank-r GF(q)-subspace U of GF(q^n)^2 with B(U) equal to the splash,
/// obtained by projecting a GF(q)-basis of the dual subgeometry from the
/// dual of the line.
LinearRepresentation splash_to_linear_subspace(const Splash& s);

struct Realization {
  subgeo::Subgeometry pi0;
  ProjSubspace line;
  LineFrame identification;  // PG(1, q^n) coordinates -> points of `line`
};

/// Embeds PG(1, q^n) as a line of PG(r-1, q^n) carrying a subgeometry whose
/// splash is the given linear set.
Realization realize_linear_set_as_splash(const fieldred::ReductionContext& ctx, const fieldred::LinearSet& l);
/// compute_splash pushed back through the identification reproduces the
/// linear set's points, with hyperplane count theta(weight) at each.
bool verify_realization(const Realization& re, const fieldred::LinearSet& l);

/// The unique rank-r tangent splash with centre t through u[0..r-1] (on
/// PG(1, q^n)). Synthetic; its defining set is <v, c_2 t, ..., c_r t>_q.
Splash tangent_splash_through(const fieldred::ReductionContext& ctx, const ProjPoint& t, std::span<const ProjPoint> u);
/// Synthetic tangent splash from a club.
Splash splash_of_club(const fieldred::LinearSet& club);
/// (T, U_1..U_r) satisfies the general-position hypothesis of the uniqueness
/// statement (rank-2 tangent splashes being sublines).
bool admissible_tuple(const gf::Tower& tower, const ProjPoint& t, std::span<const ProjPoint> u);

BigInt count_tangent_splashes(std::uint64_t q, std::uint64_t n, std::uint64_t r, bool per_centre);
/// K = q^n (q^n - 1)(q^n - q)...(q^n - q^(r-2)): admissible tuples per centre.
BigInt tangent_tuple_count(std::uint64_t q, std::uint64_t n, std::uint64_t r);
/// q^(r-1)(q^(r-1) - 1)...(q^(r-1) - q^(r-2)): admissible tuples inside one splash.
BigInt tuples_per_splash(std::uint64_t q, std::uint64_t r);
BigInt gaussian_binomial(std::uint64_t q, std::uint64_t n, std::uint64_t k);

/// All rank-r tangent splashes (clubs) on PG(1, q^n) with the given centre (or
/// any centre), one per (centre, point set) pair and sorted by it. A point set
/// can be a club with respect to more than one head when r < n. The work is
/// split into contiguous index ranges over the subspace enumeration; the merge
/// keeps the subspace of lowest index per key, so the output does not depend
/// on `workers`.
std::vector<Splash> enumerate_tangent_splashes(const fieldred::ReductionContext& ctx, std::size_t r,
                                               const std::optional<ProjPoint>& centre, unsigned workers = 1);

}  // namespace fgeom::splash
