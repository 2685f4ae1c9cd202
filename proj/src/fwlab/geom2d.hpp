#pragma once

#include "body.hpp"
#include "cone.hpp"
#include "polygon.hpp"

namespace fwlab {

/// |cross(q−p, r−p)| ≤ tol·max(1, |q−p|·|r−p|).
bool aligned(const Vec2& p, const Vec2& q, const Vec2& r, const Real& tol);
/// Exact collinearity.
bool aligned(const QVec2& p, const QVec2& q, const QVec2& r);

/// Angle in [0, π] between rays [B,A) and [B,C); throws on coincident points.
Real angle_at(const Vec2& A, const Vec2& B, const Vec2& C);

/// Largest δ ∈ [0, 1) with λ·inner ⊂ int(outer) for all λ ∈ [1−δ, 1+δ],
/// capped at 1 − ulp. Closed form over vertex/edge pairs.
Real nesting_margin(const ConvexPolygon& outer, const ConvexPolygon& inner);
/// Exact version of the same quantity (uncapped: may equal or exceed 1).
Rational nesting_margin_exact(const QPolygon& outer, const QPolygon& inner);

}  // namespace fwlab
