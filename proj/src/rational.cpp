#include "stoknap/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>

namespace stoknap {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings turn the mantissa into an exact integer.
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(m);
  if (exp >= 0) {
    r *= Rational(Int(1) << exp);
  } else {
    r /= Rational(Int(1) << -exp);
  }
  return r;
}

namespace {

Rational parse_decimal(const std::string& s) {
  // [sign] digits [. digits] [e[sign]digits]
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
  Int mantissa = 0;
  long frac_digits = 0;
  bool any = false;
  for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
    mantissa = mantissa * 10 + (s[i] - '0');
    any = true;
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      mantissa = mantissa * 10 + (s[i] - '0');
      ++frac_digits;
      any = true;
    }
  }
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
    bool edig = false;
    for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i) {
      exp10 = exp10 * 10 + (s[i] - '0');
      edig = true;
    }
    if (!edig) throw std::invalid_argument("parse_rational: bad exponent in '" + s + "'");
    if (eneg) exp10 = -exp10;
  }
  if (!any || i != s.size()) throw std::invalid_argument("parse_rational: cannot parse '" + s + "'");
  Rational r(mantissa);
  long shift = exp10 - frac_digits;
  Int p10 = 1;
  for (long k = 0; k < std::labs(shift); ++k) p10 *= 10;
  if (shift >= 0) {
    r *= Rational(p10);
  } else {
    r /= Rational(p10);
  }
  return neg ? -r : r;
}

}  // namespace

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_decimal(s.substr(0, slash));
    Rational den = parse_decimal(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator in '" + s + "'");
    return num / den;
  }
  return parse_decimal(s);
}

std::string rational_to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Int floor_rational(const Rational& x) {
  Int q = numerator(x) / denominator(x);
  if (x < 0 && q * denominator(x) != numerator(x)) --q;
  return q;
}

Int ceil_rational(const Rational& x) { return -floor_rational(-x); }

Rational round_to_multiple(const Rational& x, const Rational& g) {
  if (g <= 0) throw std::invalid_argument("round_to_multiple: grid must be positive");
  return Rational(floor_rational(x / g + Rational(1, 2))) * g;
}

Int floor_quotient(const Rational& x, const Rational& g) {
  if (g <= 0) throw std::invalid_argument("floor_quotient: grid must be positive");
  return floor_rational(x / g);
}

}  // namespace stoknap
