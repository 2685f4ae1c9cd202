#include "body.hpp"

#include "cone.hpp"

#include <limits>
#include <sstream>

namespace fwlab {

namespace {

Vec2 unit_normal(const ConvexPolygon& P, std::size_t i) { return normalized(P.edge_normal(i)); }

/// Outward offset direction at vertex i: ⟨w, n̂⟩ = 1 for both adjacent edge normals.
Vec2 miter(const ConvexPolygon& P, std::size_t i) {
  const std::size_t n = P.size();
  const Vec2 a = unit_normal(P, i + n - 1);
  const Vec2 b = unit_normal(P, i);
  return (a + b) / (1 + dot(a, b));
}

std::vector<Vec2> breakpoint_normals(const ConvexPolygon& core) {
  std::vector<Vec2> out;
  const auto v = core.vertices();
  if (v.size() == 2) {
    const Vec2 p = perp(v[1] - v[0]);
    out.push_back(p);
    out.push_back(-p);
  } else if (v.size() > 2) {
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(core.edge_normal(i));
  }
  return out;
}

}  // namespace

Body::Body(ConvexPolygon core, Real radius) : core_(std::move(core)), radius_(std::move(radius)) {
  if (radius_ < 0) throw Error("negative radius");
  if (core_.size() == 0) throw Error("empty polygon");
}

Real Body::support(const Vec2& u) const {
  if (u.x == 0 && u.y == 0) throw Error("degenerate direction");
  return core_.support(u) + radius_ * norm(u);
}

Vec2 Body::support_point(const Vec2& u) const {
  const Vec2 n = normalized(u);
  return core_.vertex(core_.support_index(u)) + radius_ * n;
}

Real Body::distance(const Vec2& p) const {
  const Real d = fwlab::distance(core_, p) - radius_;
  return d > 0 ? d : Real(0);
}

Body Body::scaled(const Real& s) const { return Body(core_.scaled(s), radius_ * s); }

Body minkowski_combination(const Body& a, const Body& b, const Real& alpha, const Real& beta) {
  if (alpha < 0 || beta < 0) throw Error("negative combination weight");
  if (alpha == 0 && beta == 0) throw Error("empty combination");
  if (beta == 0) return a.scaled(alpha);
  if (alpha == 0) return b.scaled(beta);
  std::vector<Vec2> pts;
  const auto& ca = a.core();
  const auto& cb = b.core();
  if (ca.degenerate() || cb.degenerate()) {
    for (const auto& p : ca.vertices())
      for (const auto& q : cb.vertices()) pts.push_back(alpha * p + beta * q);
  } else {
    // Edge-normal merge starting from the bottom-most vertex of each core.
    auto bottom = [](const ConvexPolygon& P) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < P.size(); ++i) {
        const auto& v = P.vertex(i);
        const auto& w = P.vertex(best);
        if (v.y < w.y || (v.y == w.y && v.x < w.x)) best = i;
      }
      return best;
    };
    const std::size_t n = ca.size();
    const std::size_t m = cb.size();
    const std::size_t i0 = bottom(ca);
    const std::size_t j0 = bottom(cb);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n || j < m) {
      pts.push_back(alpha * ca.vertex(i0 + i) + beta * cb.vertex(j0 + j));
      if (i == n) {
        ++j;
        continue;
      }
      if (j == m) {
        ++i;
        continue;
      }
      const Real c = cross(ca.edge(i0 + i), cb.edge(j0 + j));
      if (c > 0) {
        ++i;
      } else if (c < 0) {
        ++j;
      } else {
        ++i;
        ++j;
      }
    }
  }
  return Body(ConvexPolygon::hull(std::move(pts)), alpha * a.radius() + beta * b.radius());
}

Real offset_limit(const ConvexPolygon& P) {
  if (P.degenerate()) throw Error("offset of degenerate polygon");
  Real limit = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vec2 e = P.edge(i);
    const Real len = norm(e);
    const Real shrink = dot(miter(P, i + 1) - miter(P, i), e) / len;
    if (shrink > 0) limit = std::min(limit, len / shrink);
  }
  return limit;
}

Body rounded_body(const ConvexPolygon& P, const Real& r) {
  if (r < 0) throw Error("negative radius");
  if (r == 0) return Body(P, 0);
  const Real limit = offset_limit(P);
  if (!(r < limit)) {
    std::ostringstream os;
    os << "rounding radius exceeds offset limit (limit = " << to_double(limit) << ")";
    throw Error(os.str());
  }
  std::vector<Vec2> core;
  for (std::size_t i = 0; i < P.size(); ++i) core.push_back(P.vertex(i) - r * miter(P, i));
  return Body(ConvexPolygon::from_ccw(std::move(core)), r);
}

Real rounding_hausdorff_bound(const ConvexPolygon& P, const Real& r) {
  Real worst = 0;
  for (std::size_t i = 0; i < P.size(); ++i) worst = std::max(worst, norm(miter(P, i)) - 1);
  return r * worst;
}

std::vector<Vec2> bisector_directions(const ConvexPolygon& P) {
  std::vector<Vec2> d;
  const std::size_t n = P.size();
  for (std::size_t i = 0; i < n; ++i) d.push_back(normalized(unit_normal(P, i + n - 1) + unit_normal(P, i)));
  return d;
}

Real anchored_limit(const ConvexPolygon& P, const std::vector<Vec2>& directions) {
  const std::size_t n = P.size();
  if (P.degenerate() || directions.size() != n) throw Error("anchored rounding needs one direction per vertex");
  Real limit = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& d = directions[i];
    const Vec2& next = directions[(i + 1) % n];
    const Vec2& prev = directions[(i + n - 1) % n];
    const Real fwd = -dot(d, P.edge(i));
    const Real back = dot(d, P.edge(i + n - 1));
    if (!(fwd > 0) || !(back > 0)) return 0;
    const Real cf = 1 - dot(d, next);
    const Real cb = 1 - dot(d, prev);
    if (cf > 0) limit = std::min(limit, fwd / cf);
    if (cb > 0) limit = std::min(limit, back / cb);
  }
  return limit;
}

Body anchored_body(const ConvexPolygon& P, const std::vector<Vec2>& directions, const Real& r) {
  if (r < 0) throw Error("negative radius");
  const Real limit = anchored_limit(P, directions);
  if (!(r < limit)) {
    std::ostringstream os;
    os << "rounding radius exceeds offset limit (limit = " << to_double(limit) << ")";
    throw Error(os.str());
  }
  if (r == 0) return Body(P, 0);
  std::vector<Vec2> core;
  for (std::size_t i = 0; i < P.size(); ++i) core.push_back(P.vertex(i) - r * directions[i]);
  return Body(ConvexPolygon::from_ccw(std::move(core)), r);
}

Real hausdorff(const Body& a, const Body& b, std::size_t n_dirs) {
  if (n_dirs < 8) throw Error("hausdorff needs at least 8 directions");
  std::vector<Vec2> dirs = breakpoint_normals(a.core());
  for (auto& d : breakpoint_normals(b.core())) dirs.push_back(d);
  for (std::size_t k = 0; k < n_dirs; ++k) dirs.push_back(unit_at(2 * pi() * Real(k) / Real(n_dirs)));
  Real worst = 0;
  for (const auto& d : dirs) {
    const Vec2 u = normalized(d);
    worst = std::max(worst, boost::multiprecision::abs(a.support(u) - b.support(u)));
  }
  return worst;
}

std::vector<FanPiece> common_fan(const std::vector<const ConvexPolygon*>& cores) {
  std::vector<Real> cuts;
  for (const auto* c : cores)
    for (const auto& n : breakpoint_normals(*c)) cuts.push_back(angle_of(n));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<FanPiece> pieces;
  auto make = [&](const Real& lo, const Real& hi) {
    FanPiece p{lo, hi, {}};
    const Vec2 mid = unit_at((lo + hi) / 2);
    for (const auto* c : cores) p.support.push_back(c->support_index(mid));
    pieces.push_back(std::move(p));
  };
  if (cuts.empty()) {
    make(0, 2 * pi());
    return pieces;
  }
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) make(cuts[k], cuts[k + 1]);
  make(cuts.back(), cuts.front() + 2 * pi());
  return pieces;
}

}  // namespace fwlab
