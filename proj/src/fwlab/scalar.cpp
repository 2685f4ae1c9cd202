#include "scalar.hpp"

#include <cctype>

namespace fwlab {

std::string rational_to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

using Integer = boost::multiprecision::mpz_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error("malformed number");
  Integer v{std::string(s)};
  return neg ? Integer(-v) : v;
}

Rational parse_decimal(std::string_view s) {
  int exp10 = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    const auto exp_text = s.substr(e + 1);
    const Integer ex = parse_integer(exp_text);
    if (boost::multiprecision::abs(ex) > 4000) throw Error("exponent out of range");
    exp10 = ex.convert_to<int>();
    s = s.substr(0, e);
  }
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    const auto ip = s.substr(0, dot);
    const auto fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw Error("malformed number");
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<int>(fp.size());
  } else {
    if (!all_digits(s)) throw Error("malformed number");
    digits = std::string(s);
  }
  Rational v{Integer(digits)};
  const Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 >= 0)
    v *= Rational(scale);
  else
    v /= Rational(scale);
  return neg ? Rational(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error("malformed number");
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const Integer num = parse_integer(text.substr(0, slash));
    const Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error("zero denominator");
    return Rational(num, den);
  }
  return parse_decimal(text);
}

}  // namespace fwlab
