#pragma once

#include "scalar.hpp"

#include <cmath>
#include <ostream>

namespace fwlab {

template <typename T>
struct Vec2T {
  T x{0};
  T y{0};

  Vec2T() = default;
  Vec2T(T x_, T y_) : x(std::move(x_)), y(std::move(y_)) {}

  Vec2T& operator+=(const Vec2T& o) { x += o.x; y += o.y; return *this; }
  Vec2T& operator-=(const Vec2T& o) { x -= o.x; y -= o.y; return *this; }
  Vec2T& operator*=(const T& s) { x *= s; y *= s; return *this; }

  friend Vec2T operator+(Vec2T a, const Vec2T& b) { return a += b; }
  friend Vec2T operator-(Vec2T a, const Vec2T& b) { return a -= b; }
  friend Vec2T operator-(const Vec2T& a) { return {-a.x, -a.y}; }
  friend Vec2T operator*(const T& s, Vec2T a) { return a *= s; }
  friend Vec2T operator*(Vec2T a, const T& s) { return a *= s; }
  friend Vec2T operator/(const Vec2T& a, const T& s) { return {a.x / s, a.y / s}; }
  friend bool operator==(const Vec2T& a, const Vec2T& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec2T& a, const Vec2T& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const Vec2T& v) {
    return os << '(' << v.x << ", " << v.y << ')';
  }
};

using Vec2 = Vec2T<Real>;
using QVec2 = Vec2T<Rational>;

template <typename T>
T dot(const Vec2T<T>& a, const Vec2T<T>& b) { return a.x * b.x + a.y * b.y; }

template <typename T>
T cross(const Vec2T<T>& a, const Vec2T<T>& b) { return a.x * b.y - a.y * b.x; }

/// Counterclockwise quarter turn.
template <typename T>
Vec2T<T> perp(const Vec2T<T>& a) { return {-a.y, a.x}; }

inline Real norm(const Vec2& a) { return boost::multiprecision::hypot(a.x, a.y); }

inline Vec2 normalized(const Vec2& a) {
  const Real n = norm(a);
  if (n == 0) throw Error("degenerate direction");
  return a / n;
}

inline Real angle_of(const Vec2& a) {
  Real t = boost::multiprecision::atan2(a.y, a.x);
  if (t < 0) t += 2 * pi();
  return t;
}

inline Vec2 unit_at(const Real& theta) {
  return {boost::multiprecision::cos(theta), boost::multiprecision::sin(theta)};
}

inline Vec2 to_real(const QVec2& v) { return {to_real(v.x), to_real(v.y)}; }
inline Vec2 to_real(const Vec2& v) { return v; }

/// Lexicographic order on (x, then y).
template <typename T>
bool lex_less(const Vec2T<T>& a, const Vec2T<T>& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

}  // namespace fwlab
