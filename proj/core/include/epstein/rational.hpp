#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace epstein {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

// Exact integer power (negative exponents allowed for nonzero base).
inline Rational rational_pow(const Rational& base, int exponent) {
  Rational result = 1;
  Rational b = exponent >= 0 ? base : Rational(1) / base;
  unsigned e = static_cast<unsigned>(exponent >= 0 ? exponent : -exponent);
  while (e != 0) {
    if (e & 1U) result *= b;
    b *= b;
    e >>= 1U;
  }
  return result;
}

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace epstein
