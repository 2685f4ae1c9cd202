#pragma once

#include "polygon.hpp"

#include <vector>

namespace fwlab {

/// core ⊕ disc(radius). The core may be degenerate (a point gives a disc).
class Body {
 public:
  Body() = default;
  Body(ConvexPolygon core, Real radius);

  const ConvexPolygon& core() const { return core_; }
  const Real& radius() const { return radius_; }

  /// h(u) = h_core(u) + r·|u|; throws "degenerate direction" for u = 0.
  Real support(const Vec2& u) const;
  /// The boundary point with outward normal u (u nonzero; first vertex on ties).
  Vec2 support_point(const Vec2& u) const;

  Real distance(const Vec2& p) const;
  bool contains(const Vec2& p) const { return distance(p) <= 0; }
  Body scaled(const Real& s) const;

 private:
  ConvexPolygon core_;
  Real radius_{0};
};

/// Body with support α·h_a + β·h_b.
Body minkowski_combination(const Body& a, const Body& b, const Real& alpha, const Real& beta);

/// Largest r for which moving every edge of P inward by r keeps every edge.
Real offset_limit(const ConvexPolygon& P);

/// Body(core = inner offset of P by r, radius r). Contained in P.
Body rounded_body(const ConvexPolygon& P, const Real& r);

/// Distance bound between rounded_body(P, r) and P: r·(sec(θ/2) − 1) with θ the
/// largest exterior angle.
Real rounding_hausdorff_bound(const ConvexPolygon& P, const Real& r);

/// Anchored rounding: core vertex i is V_i − r·d_i, so every vertex V_i of P
/// lies on the boundary of the body with outward normal d_i. Every d_i must be
/// a unit vector in the normal cone at V_i. Contains P.
Body anchored_body(const ConvexPolygon& P, const std::vector<Vec2>& directions, const Real& r);

/// Largest r accepted by anchored_body for these directions.
Real anchored_limit(const ConvexPolygon& P, const std::vector<Vec2>& directions);

/// Unit bisectors of the normal cones, one per vertex.
std::vector<Vec2> bisector_directions(const ConvexPolygon& P);

/// Max of |h_a − h_b| over both cores' edge normals and n_dirs uniform directions.
Real hausdorff(const Body& a, const Body& b, std::size_t n_dirs = 256);

/// Angular pieces on which the support vertex of every listed core is fixed.
struct FanPiece {
  Real lo;  ///< start angle
  Real hi;  ///< end angle (> lo, at most lo + 2π)
  std::vector<std::size_t> support;  ///< support vertex index per body
};
std::vector<FanPiece> common_fan(const std::vector<const ConvexPolygon*>& cores);

}  // namespace fwlab
