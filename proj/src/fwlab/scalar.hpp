#pragma once

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace fwlab {

/// Exact scalar used by the counterexample recursions and reference dynamics.
using Rational = boost::multiprecision::mpq_rational;

/// Binary floating scalar used by objective evaluation and solver runs.
///
/// Quad precision is required: near deep levels of the line-search
/// constructions the rounding radius shrinks geometrically while the
/// gradient's sideways component (which decides the oracle answer) shrinks
/// at the same rate, so the landing point has to be resolved far below
/// double precision.
using Real = boost::multiprecision::float128;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Real to_real(const Rational& q) { return q.convert_to<Real>(); }
inline Real to_real(const Real& x) { return x; }
inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline const Real& pi() {
  static const Real value = boost::multiprecision::acos(Real(-1));
  return value;
}

/// Renders "p/q" (or "p" for integers).
std::string rational_to_string(const Rational& q);

/// Accepts "p/q", integers, and finite decimals such as "0.25" or "-1e-3".
Rational parse_rational(std::string_view text);

}  // namespace fwlab
