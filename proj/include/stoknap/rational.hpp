#ifndef STOKNAP_RATIONAL_HPP
#define STOKNAP_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace stoknap {

/// Arbitrary-precision integer and rational types used wherever the solvers
/// need exact arithmetic (quantized DP coordinates, pmf convolution,
/// feasibility comparisons).
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact conversion of a finite double to a rational (every finite double is
/// a dyadic rational).
Rational rational_from_double(double x);

/// Parses "3/7", "-5", "0.25" or "1e-3" exactly. Decimal strings are parsed
/// digit-by-digit, never through a double.
Rational parse_rational(const std::string& s);

/// "3/7" for non-integers, "5" for integers.
std::string rational_to_string(const Rational& r);

Int floor_rational(const Rational& x);
Int ceil_rational(const Rational& x);

/// Nearest integer multiple of g (ties round up); g > 0.
Rational round_to_multiple(const Rational& x, const Rational& g);

/// ⌊x / g⌋ for g > 0.
Int floor_quotient(const Rational& x, const Rational& g);

inline Rational pow_rational(const Rational& base, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace stoknap

#endif
