#include "cone.hpp"

#include <sstream>

namespace fwlab {

namespace {

Real wrap(Real a) {
  const Real two_pi = 2 * pi();
  a = boost::multiprecision::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

std::string describe(const ConeSector& s) {
  std::ostringstream os;
  os << "[" << to_double(s.start()) << ", +" << to_double(s.angle()) << " rad]";
  return os.str();
}

}  // namespace

ConeSector ConeSector::between(const Vec2& lo, const Vec2& hi) {
  const Real a = angle_of(lo);
  Real w = wrap(angle_of(hi) - a);
  ConeSector s;
  s.lo_ = normalized(lo);
  s.hi_ = normalized(hi);
  s.start_ = a;
  s.width_ = w;
  return s;
}

ConeSector ConeSector::from_angles(const Real& start, const Real& width) {
  if (width < 0 || width > 2 * pi()) throw Error("cone width out of range");
  ConeSector s;
  s.start_ = wrap(start);
  s.width_ = width;
  s.lo_ = unit_at(s.start_);
  s.hi_ = unit_at(s.start_ + width);
  return s;
}

ConeSector ConeSector::full_plane() { return from_angles(0, 2 * pi()); }

Real ConeSector::offset_of(const Vec2& u) const { return wrap(angle_of(u) - start_); }

bool ConeSector::contains(const Vec2& u, const Real& slack) const {
  if (width_ + 2 * slack >= 2 * pi()) return true;
  const Real d = offset_of(u);
  return d <= width_ + slack || d >= 2 * pi() - slack;
}

bool ConeSector::contains_interior(const Vec2& u, const Real& margin) const {
  if (width_ >= 2 * pi()) return true;
  const Real d = offset_of(u);
  return d > margin && d < width_ - margin;
}

bool ConeSector::contains(const ConeSector& other, const Real& slack) const {
  if (width_ + 2 * slack >= 2 * pi()) return true;
  if (other.width_ > width_ + 2 * slack) return false;
  Real d = offset_of(other.lo_);
  if (d >= 2 * pi() - slack) d -= 2 * pi();
  return d + other.width_ <= width_ + slack;
}

std::optional<ConeSector> intersect(const ConeSector& a, const ConeSector& b) {
  const Real two_pi = 2 * pi();
  if (a.angle() >= two_pi) return b;
  if (b.angle() >= two_pi) return a;
  if (a.angle() + b.angle() > two_pi) throw Error("cone intersection is not a single sector: " + describe(a) + " and " + describe(b));
  const Real d_ab = wrap(b.start() - a.start());
  if (d_ab <= a.angle()) return ConeSector::from_angles(b.start(), std::min(a.angle() - d_ab, b.angle()));
  const Real d_ba = wrap(a.start() - b.start());
  if (d_ba <= b.angle()) return ConeSector::from_angles(a.start(), std::min(b.angle() - d_ba, a.angle()));
  return std::nullopt;
}

VertexCones cones_at_vertex_index(const ConvexPolygon& P, std::size_t i) {
  if (P.degenerate()) throw Error("not a vertex");
  const std::size_t n = P.size();
  VertexCones c;
  c.normal = ConeSector::between(P.edge_normal(i + n - 1), P.edge_normal(i));
  const Vec2 V = P.vertex(i);
  c.tangent = ConeSector::between(P.vertex(i + 1) - V, P.vertex(i + n - 1) - V);
  const auto k = intersect(c.normal, c.tangent.negated());
  // N and −T share the bisector of the corner, so K is never empty.
  c.admissible = k ? *k : ConeSector::from_angles(c.normal.start(), 0);
  return c;
}

VertexCones cones_at_vertex(const ConvexPolygon& P, const Vec2& V) {
  const auto i = P.degenerate() ? std::nullopt : P.vertex_index(V);
  if (!i) throw Error("not a vertex");
  return cones_at_vertex_index(P, *i);
}

VertexCones cones_at_vertex(const QPolygon& P, const QVec2& V) {
  const auto i = P.degenerate() ? std::nullopt : P.vertex_index(V);
  if (!i) throw Error("not a vertex");
  return cones_at_vertex_index(to_real(P), *i);
}

ConeSector oracle_cone(const ConvexPolygon& P, const Vec2& V) { return cones_at_vertex(P, V).normal.negated(); }

}  // namespace fwlab
