// Thin value-semantic wrapper over an MPFR variable.
#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>
#include <utility>

namespace sudler {

/// Working precision in bits.
struct Precision {
  long bits = 128;

  constexpr Precision() = default;
  constexpr explicit Precision(long b) : bits(b) {}
  constexpr Precision operator+(long extra) const { return Precision(bits + extra); }
  friend constexpr auto operator<=>(Precision, Precision) = default;
};

class Real {
 public:
  explicit Real(Precision prec = Precision{});
  Real(long value, Precision prec);
  Real(double value, Precision prec);
  Real(const mpz_class& value, Precision prec);
  Real(const mpq_class& value, Precision prec);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  Precision precision() const { return Precision(mpfr_get_prec(value_)); }

  /// Round to a new precision in place.
  void set_precision(Precision prec);
  Real with_precision(Precision prec) const;

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  /// Scientific notation with `digits` significant decimal digits.
  std::string to_string(int digits = 30) const;
  /// Exact binary representation, e.g. 0x1.8p+1.
  std::string to_hex() const;
  /// Accepts decimal or 0x-prefixed hexadecimal floating-point text.
  static Real parse(std::string_view text, Precision prec);

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }
  friend Real operator*(Real lhs, long rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, long rhs) { return lhs /= rhs; }
  Real operator-() const;

  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

 private:
  mpfr_t value_;
};

Real abs(const Real& x);
Real sqrt(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real exp(const Real& x);
Real floor(const Real& x);
Real frac(const Real& x);  // x - floor(x)
Real pow(const Real& x, long n);
Real pi(Precision prec);
Real max(const Real& a, const Real& b);

}  // namespace sudler
