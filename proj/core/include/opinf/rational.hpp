#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace opinf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Safe two-argument construction.  (The underlying rational type mishandles
// negative denominators when built over an unbounded integer, so the sign is
// normalized before construction.)
inline Rational make_rational(BigInt num, BigInt den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

inline Rational make_rational(long long num, long long den = 1) {
  return make_rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// 4^k as an exact integer, used for normalization factors of n-party
// uniform-marginal distributions.
inline BigInt pow4(int k) {
  BigInt v = 1;
  for (int i = 0; i < k; ++i) v *= 4;
  return v;
}

} // namespace opinf
