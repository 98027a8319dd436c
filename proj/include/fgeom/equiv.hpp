#pragma once

// Algebraic coordinates of tangent splashes, the s-tuple solver, distinct
// subgeometries with a common splash, and splash equivalence under PGL/PGammaL.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fgeom/splash.hpp"

namespace fgeom::equiv {

using gf::FieldElement;
using linalg::Matrix;
using linalg::Vec;
using pg::Collineation;
using pg::ProjPoint;
using pg::ProjSubspace;
using splash::LineFrame;
using splash::Splash;
using subgeo::SubHyperplane;
using subgeo::Subgeometry;

/// S minus its centre is {<x u + sum y_i rho_i u + v> : x, y_i in GF(q)}.
/// Vectors live in the ambient space of the splash's line.
struct SplashCoordinates {
  LineFrame frame;
  Vec u;                           // spans the centre T
  Vec v;                           // spans the base point P
  std::vector<FieldElement> rho;   // rho_1 .. rho_{r-2}
  int rank = 0;

  ProjPoint centre() const { return ProjPoint(u); }
  ProjPoint base() const { return ProjPoint(v); }
  /// (1, rho_1, ..., rho_{r-2})
  std::vector<FieldElement> weights() const;
  /// The point set described by the coordinates, centre included, sorted.
  std::vector<ProjPoint> regenerate(const gf::Tower& tower) const;
};

/// Throws NotTangent unless S is tangent with P a non-centre point.
SplashCoordinates splash_coordinates(const gf::Tower& tower, const Splash& s, const ProjPoint& p);

/// The hyperplane of pi0 whose extension meets the line in P.
const SubHyperplane& hyperplane_through(const Subgeometry& pi0, const ProjSubspace& line, const ProjPoint& p);

struct STuple {
  std::vector<Vec> s;   // s_0 .. s_{r-2}
  FieldElement zeta;    // u lies in zeta * (GF(q)-row space of the basis)
  Matrix a;             // over GF(q): s = a * (basis of the hyperplane's vectors)
};

struct Ambiguity {
  FieldElement zeta;
  Matrix m;             // over GF(q); s' = zeta^-1 m s
  std::vector<Vec> s;
};

struct STupleSolution {
  STuple canonical;
  /// Every distinct s' = zeta^-1 M s (zeta in GF(q^n)*, M in GL(r-1, q)) that
  /// again satisfies the two defining conditions; the canonical one included.
  std::vector<Ambiguity> alternatives;
  bool certificate_complete = true;

  bool unique() const { return alternatives.size() == 1; }
};

/// s with B(<s>_q) = H0 and v = s_0 + sum rho_i s_i; pi0 = B(<u, s>_q) is
/// checked before returning. NoSolution if the preconditions fail.
STupleSolution solve_s_tuple(const Subgeometry& pi0, const ProjSubspace& line, const SplashCoordinates& coords,
                             const SubHyperplane& h0);

/// Points of B(<vectors>_q), sorted.
std::vector<ProjPoint> subgeometry_points(const gf::Tower& tower, std::span<const Vec> vectors);

struct SameSplashWitness {
  std::uint64_t q = 0;
  std::uint32_t n = 0;
  std::size_t r = 0;
  Subgeometry pi0;
  Subgeometry pi1;
  ProjSubspace line;
  ProjPoint centre;
  SubHyperplane h0;
  FieldElement zeta;
  Matrix m0;                        // companion matrix, over GF(q)
  Vec w;                            // eigenvector of m0 for zeta, w_1 = 1
  std::vector<FieldElement> omega;  // GF(q^d)-basis of GF(q^n), omega_1 = 1
  std::vector<FieldElement> rho;    // (1, rho_1, ..., rho_{r-2})
  Matrix m;                         // block diagonal copies of m0
  std::vector<Vec> s;
  std::vector<Vec> s_prime;
  Collineation kappa;
};

struct InvariantCheck {
  std::string name;
  bool holds;
};

std::vector<InvariantCheck> witness_invariants(const SameSplashWitness& w);

/// Two distinct subgeometries of PG(r-1, q^n) with the same tangent splash and
/// a common hyperplane. GcdIsOne when gcd(n, r-1) = 1.
SameSplashWitness construct_same_splash_pair(std::uint64_t q, std::uint32_t n, std::size_t r);

/// A projectivity fixing the line pointwise and mapping pi0 to pi1.
/// SplashesDiffer unless the two tangent splashes coincide.
Collineation find_projectivity_same_splash(const Subgeometry& pi0, const Subgeometry& pi1, const ProjSubspace& line);

/// For every hyperplane H0 of pi0 missing the centre, every subgeometry through
/// H0 and the centre, B(<s, mu u>_q), is tested against the splash of pi0.
struct SharedHyperplaneScan {
  std::size_t configurations = 0;
  std::size_t same_splash = 0;
  std::size_t same_splash_but_distinct = 0;
};
SharedHyperplaneScan shared_hyperplane_scan(const Subgeometry& pi0, const ProjSubspace& line);

enum class Group { PGL, PGammaL };
std::string to_string(Group g);

/// Thrown when the candidate frame budget runs out before a witness is found.
class SearchBudgetExceeded : public Error {
 public:
  SearchBudgetExceeded(std::uint64_t examined, std::uint64_t total)
      : Error(ErrorCode::SearchBudgetExceeded,
              "examined " + std::to_string(examined) + " of " + std::to_string(total) + " candidate frames"),
        examined_(examined),
        total_(total) {}
  std::uint64_t examined() const { return examined_; }
  std::uint64_t total() const { return total_; }

 private:
  std::uint64_t examined_;
  std::uint64_t total_;
};

struct EquivalenceResult {
  std::optional<Collineation> theta;
  Group group = Group::PGL;
  std::uint64_t frames_examined = 0;
  std::uint64_t frames_total = 0;
  bool exhaustive = false;  // true when a "none" answer covers every frame
};

/// A collineation of PG(1, q^n) mapping S0 onto S1 (points in line coordinates,
/// counts or weights preserved), found by sending the frame (centre, two
/// further points) of S0 to every compatible frame of S1.
EquivalenceResult splash_equivalence(const Splash& s0, const Splash& s1, Group group,
                                     std::uint64_t budget = UINT64_MAX, unsigned workers = 1);

/// The map of PG(1) sending x_i to y_i (three distinct points each).
Matrix three_point_map(std::span<const ProjPoint, 3> x, std::span<const ProjPoint, 3> y);

/// theta acting on the splash's point list, sorted.
std::vector<ProjPoint> image(const Collineation& c, std::span<const ProjPoint> pts);

/// P blk(G, I) sigma^j(P)^-1 for P = [a b e...]: extends a collineation of the
/// frame's line to the ambient space, fixing the line.
Collineation extend_from_line(const Collineation& theta, const LineFrame& frame);
/// The action of a line-stabilizing collineation on frame coordinates.
Collineation restrict_to_line(const Collineation& tau, const LineFrame& frame);
/// Random collineation stabilizing the frame's line.
Collineation random_line_stabilizer(const LineFrame& frame, Group group, std::mt19937_64& rng);
Collineation random_pgl2(const gf::Field& f, Group group, std::mt19937_64& rng);

/// tau with tau(line) = line and tau(pi0) = pi1, given theta mapping the
/// splash of pi0 to that of pi1 in the frame of the line's RREF basis.
Collineation lift_equivalence(const Subgeometry& pi0, const Subgeometry& pi1, const ProjSubspace& line,
                              const Collineation& theta);

/// Every element of PGL(2, F) (or PGammaL), one matrix per projective class.
std::vector<Collineation> enumerate_pgl2(const gf::Field& f, Group group);

struct OrbitCensus {
  std::size_t clubs = 0;
  std::uint64_t group_order = 0;
  std::vector<std::size_t> orbit_sizes;  // descending
};

/// Orbits of the rank-r clubs of PG(1, q^n) under the group, by breadth-first
/// search over a generating set.
OrbitCensus club_orbit_census(const fieldred::ReductionContext& ctx, std::size_t r, Group group, unsigned workers = 1);

}  // namespace fgeom::equiv
