#pragma once

#include "polygon.hpp"

#include <optional>

namespace fwlab {

/// Closed angular sector swept counterclockwise from `lo` to `hi`.
/// Widths of pi (half-plane) and 2*pi (full plane) are representable.
class ConeSector {
 public:
  ConeSector() = default;
  /// Sector from direction `lo` counterclockwise to direction `hi`.
  static ConeSector between(const Vec2& lo, const Vec2& hi);
  static ConeSector from_angles(const Real& start, const Real& width);
  static ConeSector full_plane();

  const Vec2& lo() const { return lo_; }
  const Vec2& hi() const { return hi_; }
  const Real& start() const { return start_; }
  /// Swept angle in [0, 2*pi].
  const Real& angle() const { return width_; }

  /// Closed membership with an angular slack (radians).
  bool contains(const Vec2& u, const Real& slack = 0) const;
  /// Membership at least `margin` radians away from both boundary rays.
  bool contains_interior(const Vec2& u, const Real& margin = 0) const;
  bool contains(const ConeSector& other, const Real& slack = 0) const;

  Vec2 midpoint() const { return unit_at(start_ + width_ / 2); }
  ConeSector negated() const { return from_angles(start_ + pi(), width_); }

 private:
  Real offset_of(const Vec2& u) const;

  Vec2 lo_{1, 0};
  Vec2 hi_{1, 0};
  Real start_{0};
  Real width_{0};
};

/// Intersection of two sectors; nullopt when empty. Throws when the result
/// would not be a single sector (widths summing above 2*pi).
std::optional<ConeSector> intersect(const ConeSector& a, const ConeSector& b);

struct VertexCones {
  ConeSector normal;      ///< normal cone N_P V
  ConeSector tangent;     ///< tangent cone T_P V
  ConeSector admissible;  ///< N_P V intersected with -T_P V
};

/// Cones of P at its vertex V; throws "not a vertex" otherwise.
VertexCones cones_at_vertex(const QPolygon& P, const QVec2& V);
VertexCones cones_at_vertex(const ConvexPolygon& P, const Vec2& V);
VertexCones cones_at_vertex_index(const ConvexPolygon& P, std::size_t i);

/// Directions u for which V is the unique minimizer of <v, u> over P:
/// the interior of -N_P V.
ConeSector oracle_cone(const ConvexPolygon& P, const Vec2& V);

}  // namespace fwlab
