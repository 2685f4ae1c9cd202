#include "geom2d.hpp"

#include <limits>

namespace fwlab {

namespace {

Real point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const Real len2 = dot(ab, ab);
  if (len2 == 0) return norm(p - a);
  Real s = dot(p - a, ab) / len2;
  if (s < 0) s = 0;
  if (s > 1) s = 1;
  return norm(p - (a + s * ab));
}

template <typename T>
void require_origin_interior(const ConvexPolygonT<T>& outer, const ConvexPolygonT<T>& inner) {
  const Vec2T<T> o{T(0), T(0)};
  if (!outer.strictly_contains(o) || !inner.strictly_contains(o)) throw Error("origin not interior");
}

}  // namespace

Real distance(const ConvexPolygon& poly, const Vec2& p) {
  const auto v = poly.vertices();
  if (v.size() == 1) return norm(p - v[0]);
  if (v.size() == 2) return point_segment_distance(p, v[0], v[1]);
  if (poly.contains(p)) return 0;
  Real best = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) best = std::min(best, point_segment_distance(p, poly.vertex(i), poly.vertex(i + 1)));
  return best;
}

bool contains(const ConvexPolygon& poly, const Vec2& p, const Real& tol) {
  if (poly.degenerate()) return distance(poly, p) <= tol;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 e = poly.edge(i);
    if (cross(e, p - poly.vertex(i)) < -tol * norm(e)) return false;
  }
  return true;
}

Real diameter(const ConvexPolygon& poly) {
  Real best = 0;
  const auto v = poly.vertices();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, norm(v[i] - v[j]));
  return best;
}

bool aligned(const Vec2& p, const Vec2& q, const Vec2& r, const Real& tol) {
  const Vec2 a = q - p;
  const Vec2 b = r - p;
  const Real scale = std::max(Real(1), norm(a) * norm(b));
  return boost::multiprecision::abs(cross(a, b)) <= tol * scale;
}

bool aligned(const QVec2& p, const QVec2& q, const QVec2& r) { return cross(QVec2(q - p), QVec2(r - p)) == 0; }

Real angle_at(const Vec2& A, const Vec2& B, const Vec2& C) {
  const Vec2 a = A - B;
  const Vec2 c = C - B;
  if ((a.x == 0 && a.y == 0) || (c.x == 0 && c.y == 0)) throw Error("coincident points");
  // atan2 form stays accurate near 0 and π.
  return boost::multiprecision::atan2(boost::multiprecision::abs(cross(a, c)), dot(a, c));
}

Real nesting_margin(const ConvexPolygon& outer, const ConvexPolygon& inner) {
  require_origin_interior(outer, inner);
  // λ·inner ⊂ int(outer) exactly for λ < λ_max; the lower side is free since
  // both contain the origin.
  Real lambda_max = std::numeric_limits<Real>::infinity();
  for (std::size_t e = 0; e < outer.size(); ++e) {
    const Vec2 n = outer.edge_normal(e);
    const Real h = dot(outer.vertex(e), n);
    for (const auto& w : inner.vertices()) {
      const Real s = dot(w, n);
      if (s > 0) lambda_max = std::min(lambda_max, h / s);
    }
  }
  const Real cap = 1 - std::numeric_limits<Real>::epsilon();
  Real delta = lambda_max - 1;
  if (!(delta > 0)) return 0;
  return std::min(delta, cap);
}

Rational nesting_margin_exact(const QPolygon& outer, const QPolygon& inner) {
  require_origin_interior(outer, inner);
  bool found = false;
  Rational lambda_max;
  for (std::size_t e = 0; e < outer.size(); ++e) {
    const QVec2 n = outer.edge_normal(e);
    const Rational h = dot(outer.vertex(e), n);
    for (const auto& w : inner.vertices()) {
      const Rational s = dot(w, n);
      if (s > 0) {
        Rational ratio = h / s;
        if (!found || ratio < lambda_max) lambda_max = std::move(ratio);
        found = true;
      }
    }
  }
  Rational delta = lambda_max - 1;
  return delta > 0 ? delta : Rational(0);
}

}  // namespace fwlab
