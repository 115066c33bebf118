#pragma once

#include <doctest.h>

#include <cmath>
#include <string>

#include "sudler/real.hpp"

namespace doctest {
template <>
struct StringMaker<sudler::Real> {
  static String convert(const sudler::Real& x) { return x.to_string(25).c_str(); }
};
}  // namespace doctest

namespace testing {

inline sudler::Real two_pow(long e) {
  sudler::Real one(1L, sudler::Precision(64));
  mpfr_mul_2si(one.get(), one.get(), e, MPFR_RNDN);
  return one;
}

// |x - expected| < 2^-bits, expected given as a decimal literal.
inline bool close(const sudler::Real& x, const char* expected, long bits) {
  const sudler::Precision p(bits + 64);
  const sudler::Real diff = abs(x.with_precision(p) - sudler::Real::parse(expected, p));
  return diff < two_pow(-bits);
}

inline bool rel_close(const sudler::Real& x, const sudler::Real& y, long bits) {
  const sudler::Precision p(bits + 64);
  const sudler::Real xx = x.with_precision(p);
  const sudler::Real yy = y.with_precision(p);
  return abs(xx - yy) <= abs(yy) * two_pow(-bits).with_precision(p);
}

}  // namespace testing
