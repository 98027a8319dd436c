#pragma once

// q-subgeometries of PG(r-1, q^n).

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "fgeom/projgeom.hpp"

namespace fgeom::subgeo {

using TowerRef = std::shared_ptr<const gf::Tower>;
using linalg::Matrix;
using linalg::Vec;
using pg::ProjPoint;
using pg::ProjSubspace;

/// A hyperplane of a subgeometry: the GF(q)-hyperplane {lambda : c . lambda = 0}
/// of coefficient space together with its extension {x : normal . x = 0}.
struct SubHyperplane {
  Vec coefficients;  // c, over GF(q), normalized
  Vec normal;        // over GF(q^n)
  ProjSubspace extension;
  std::vector<ProjPoint> points;  // subgeometry points on it, sorted
};

/// The points <sum lambda_i b_i> with lambda over GF(q), where b_i are the
/// rows of an invertible basis matrix over GF(q^n).
class Subgeometry {
 public:
  Subgeometry(TowerRef tower, Matrix basis);

  const gf::Tower& tower() const { return *tower_; }
  const TowerRef& tower_ref() const { return tower_; }
  const gf::Field& field() const { return *tower_->ext(); }
  std::size_t rank() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }

  /// Sorted point set, built once on first use.
  const std::vector<ProjPoint>& points() const;
  /// All (q^r - 1)/(q - 1) hyperplanes in the order of their coefficient
  /// vectors, built once on first use.
  const std::vector<SubHyperplane>& hyperplanes() const;
  bool contains(const ProjPoint& p) const;

  /// sum lambda_i b_i for lambda over GF(q).
  Vec combine(std::span<const gf::FieldElement> lambda) const;

  /// Equal point sets; basis matrices may differ by zeta * M.
  friend bool operator==(const Subgeometry& a, const Subgeometry& b);

 private:
  struct Cache {
    std::once_flag points_once;
    std::vector<ProjPoint> points;
    std::once_flag hyperplanes_once;
    std::vector<SubHyperplane> hyperplanes;
  };

  TowerRef tower_;
  Matrix basis_;
  std::shared_ptr<Cache> cache_;
};

Subgeometry canonical_subgeometry(TowerRef tower, std::size_t r);
/// From r + 1 points in general position (r basis points and a unit point);
/// the basis maps the standard frame onto the given one.
Subgeometry subgeometry_from_frame(TowerRef tower, std::span<const ProjPoint> frame);
const std::vector<SubHyperplane>& sub_hyperplanes(const Subgeometry& s);

Subgeometry apply(const pg::Collineation& c, const Subgeometry& s);

enum class LineKind { Secant, Tangent, External };

struct LinePosition {
  LineKind kind;
  std::optional<ProjPoint> centre;  // tangent only
  std::vector<ProjPoint> subline;   // secant only: the q + 1 common points
};

/// Throws LineInExtendedHyperplane when the line lies in an extended hyperplane.
LinePosition line_position(const Subgeometry& s, const ProjSubspace& line);
bool in_extended_hyperplane(const Subgeometry& s, const ProjSubspace& line);
/// Lines of the ambient space not inside any extended hyperplane.
std::vector<ProjSubspace> admissible_lines(const Subgeometry& s);

}  // namespace fgeom::subgeo
