#pragma once

#include "fwlab/analysis.hpp"
#include "fwlab/geom2d.hpp"

#include <doctest.h>

#include <random>

namespace fwtest {

using namespace fwlab;

inline Rational q(long p, long d = 1) { return Rational(p, d); }
inline QVec2 qv(const Rational& x, const Rational& y) { return {x, y}; }
inline Vec2 rv(double x, double y) { return {Real(x), Real(y)}; }
inline double d(const Real& x) { return to_double(x); }

inline ConvexPolygon square(double lo, double hi) {
  return ConvexPolygon::hull({rv(lo, lo), rv(hi, lo), rv(hi, hi), rv(lo, hi)});
}

inline Vec2 random_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(0, 2 * 3.141592653589793);
  return unit_at(Real(a(rng)));
}

/// Uniform sample of a polygon by rejection from its bounding box.
inline Vec2 sample_in(const ConvexPolygon& P, std::mt19937_64& rng) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& v : P.vertices()) {
    x0 = std::min(x0, d(v.x)), x1 = std::max(x1, d(v.x));
    y0 = std::min(y0, d(v.y)), y1 = std::max(y1, d(v.y));
  }
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  for (;;) {
    const Vec2 p{Real(ux(rng)), Real(uy(rng))};
    if (P.contains(p)) return p;
  }
}

/// Brute-force support over a dense boundary sampling of a body.
inline Real sampled_support(const Body& b, const Vec2& u, int per_vertex = 2000) {
  Real best = -std::numeric_limits<Real>::infinity();
  for (const auto& c : b.core().vertices())
    for (int i = 0; i < per_vertex; ++i) {
      const Vec2 p = c + b.radius() * unit_at(2 * pi() * Real(i) / per_vertex);
      best = std::max(best, dot(p, u));
    }
  return best;
}

/// Angle between two nonzero vectors.
inline Real angle_between(const Vec2& a, const Vec2& b) {
  return boost::multiprecision::atan2(boost::multiprecision::abs(cross(a, b)), dot(a, b));
}

}  // namespace fwtest
