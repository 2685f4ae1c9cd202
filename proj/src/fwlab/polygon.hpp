#pragma once

#include "vec2.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

namespace fwlab {

/// Compact convex polygon stored as a strictly convex counterclockwise vertex
/// list. Segments and single points are kept as a flagged degenerate variant
/// that only supports support/distance queries.
template <typename T>
class ConvexPolygonT {
 public:
  ConvexPolygonT() = default;

  /// Convex hull of an arbitrary point cloud; collinear and repeated points
  /// are dropped.
  static ConvexPolygonT hull(std::vector<Vec2T<T>> pts) {
    if (pts.empty()) throw Error("empty polygon");
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return lex_less(a, b); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() <= 2) return ConvexPolygonT(std::move(pts), true);
    std::vector<Vec2T<T>> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
      h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
      while (k >= lo && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
      h[k++] = pts[i];
    }
    h.resize(k - 1);
    const bool degenerate = h.size() < 3;
    return ConvexPolygonT(std::move(h), degenerate);
  }

  /// Takes an already strictly convex counterclockwise list; throws otherwise.
  static ConvexPolygonT from_ccw(std::vector<Vec2T<T>> verts) {
    if (verts.size() < 3) throw Error("polygon needs at least three vertices");
    const std::size_t n = verts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = verts[i];
      const auto& b = verts[(i + 1) % n];
      const auto& c = verts[(i + 2) % n];
      if (!(cross(b - a, c - b) > 0)) throw Error("vertex list is not strictly convex counterclockwise");
    }
    // Winding: strict left turns everywhere can still wrap twice.
    T area2{0};
    for (std::size_t i = 0; i < n; ++i) area2 += cross(verts[i], verts[(i + 1) % n]);
    if (!(area2 > 0)) throw Error("vertex list is not counterclockwise");
    return ConvexPolygonT(std::move(verts), false);
  }

  /// Segment [a, b], the degenerate variant used for solution sets.
  static ConvexPolygonT segment(Vec2T<T> a, Vec2T<T> b) { return ConvexPolygonT({std::move(a), std::move(b)}, true); }

  std::size_t size() const { return verts_.size(); }
  bool degenerate() const { return degenerate_; }
  std::span<const Vec2T<T>> vertices() const { return verts_; }
  const Vec2T<T>& vertex(std::size_t i) const { return verts_[i % verts_.size()]; }
  /// Edge i runs from vertex i to vertex i+1.
  Vec2T<T> edge(std::size_t i) const { return vertex(i + 1) - vertex(i); }
  /// Outward (unnormalized) normal of edge i.
  Vec2T<T> edge_normal(std::size_t i) const {
    const auto e = edge(i);
    return {e.y, -e.x};
  }

  std::optional<std::size_t> vertex_index(const Vec2T<T>& p) const {
    for (std::size_t i = 0; i < verts_.size(); ++i)
      if (verts_[i] == p) return i;
    return std::nullopt;
  }

  /// Index of a vertex maximizing <v, u>; the first one on ties.
  std::size_t support_index(const Vec2T<T>& u) const {
    std::size_t best = 0;
    T best_val = dot(verts_[0], u);
    for (std::size_t i = 1; i < verts_.size(); ++i) {
      T v = dot(verts_[i], u);
      if (v > best_val) {
        best_val = std::move(v);
        best = i;
      }
    }
    return best;
  }
  T support(const Vec2T<T>& u) const { return dot(verts_[support_index(u)], u); }

  /// Closed containment (exact for rationals).
  bool contains(const Vec2T<T>& p) const {
    if (degenerate_) throw Error("containment on degenerate polygon");
    for (std::size_t i = 0; i < verts_.size(); ++i)
      if (cross(edge(i), p - verts_[i]) < 0) return false;
    return true;
  }
  bool strictly_contains(const Vec2T<T>& p) const {
    if (degenerate_) return false;
    for (std::size_t i = 0; i < verts_.size(); ++i)
      if (!(cross(edge(i), p - verts_[i]) > 0)) return false;
    return true;
  }

  ConvexPolygonT scaled(const T& s) const {
    std::vector<Vec2T<T>> v(verts_.begin(), verts_.end());
    for (auto& p : v) p *= s;
    if (!(s > 0)) throw Error("polygon scale must be positive");
    return ConvexPolygonT(std::move(v), degenerate_);
  }

 private:
  ConvexPolygonT(std::vector<Vec2T<T>> v, bool degenerate) : verts_(std::move(v)), degenerate_(degenerate) {}

  template <typename>
  friend class ConvexPolygonT;

  std::vector<Vec2T<T>> verts_;
  bool degenerate_ = false;

 public:
  template <typename U>
  static ConvexPolygonT convert(const ConvexPolygonT<U>& other) {
    std::vector<Vec2T<T>> v;
    v.reserve(other.size());
    for (const auto& p : other.vertices()) v.push_back(to_real(p));
    return ConvexPolygonT(std::move(v), other.degenerate());
  }
};

using ConvexPolygon = ConvexPolygonT<Real>;
using QPolygon = ConvexPolygonT<Rational>;

inline ConvexPolygon to_real(const QPolygon& p) { return ConvexPolygon::convert(p); }

/// Euclidean distance from p to the polygon (zero inside).
Real distance(const ConvexPolygon& poly, const Vec2& p);

/// Closed containment with a length tolerance on every edge constraint.
bool contains(const ConvexPolygon& poly, const Vec2& p, const Real& tol);

Real diameter(const ConvexPolygon& poly);

}  // namespace fwlab
