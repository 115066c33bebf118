// Exact quadratic irrationals and correctly scaled fractional parts {r alpha}.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sudler/cf.hpp"
#include "sudler/real.hpp"

namespace sudler::cf {

/// Element x + y*sqrt(d) of the field Q(sqrt d), d > 0 not a square.
class QuadraticNumber {
 public:
  QuadraticNumber(mpz_class d, mpq_class x, mpq_class y);
  static QuadraticNumber rational(const mpz_class& d, const mpq_class& x) { return {d, x, 0}; }
  static QuadraticNumber root(const mpz_class& d) { return {d, 0, 1}; }

  const mpz_class& radicand() const { return d_; }
  const mpq_class& rational_part() const { return x_; }
  const mpq_class& surd_part() const { return y_; }

  bool is_zero() const { return sgn(x_) == 0 && sgn(y_) == 0; }
  /// Exact sign, decided in integer arithmetic.
  int sign() const;
  QuadraticNumber conjugate() const { return {d_, x_, -y_}; }
  /// x^2 - d y^2
  mpq_class norm() const { return x_ * x_ - mpq_class(d_) * y_ * y_; }
  QuadraticNumber abs() const { return sign() < 0 ? -*this : *this; }
  QuadraticNumber pow(unsigned n) const;
  Real to_real(Precision prec) const;

  QuadraticNumber operator-() const { return {d_, -x_, -y_}; }
  QuadraticNumber& operator+=(const QuadraticNumber& rhs);
  QuadraticNumber& operator-=(const QuadraticNumber& rhs);
  QuadraticNumber& operator*=(const QuadraticNumber& rhs);
  QuadraticNumber& operator/=(const QuadraticNumber& rhs);
  friend QuadraticNumber operator+(QuadraticNumber a, const QuadraticNumber& b) { return a += b; }
  friend QuadraticNumber operator-(QuadraticNumber a, const QuadraticNumber& b) { return a -= b; }
  friend QuadraticNumber operator*(QuadraticNumber a, const QuadraticNumber& b) { return a *= b; }
  friend QuadraticNumber operator/(QuadraticNumber a, const QuadraticNumber& b) { return a /= b; }
  friend QuadraticNumber operator*(QuadraticNumber a, const mpq_class& s) {
    a.x_ *= s;
    a.y_ *= s;
    return a;
  }
  friend QuadraticNumber operator+(QuadraticNumber a, const mpq_class& s) {
    a.x_ += s;
    return a;
  }
  friend QuadraticNumber operator-(QuadraticNumber a, const mpq_class& s) {
    a.x_ -= s;
    return a;
  }
  friend bool operator==(const QuadraticNumber& a, const QuadraticNumber& b) {
    return a.d_ == b.d_ && a.x_ == b.x_ && a.y_ == b.y_;
  }

 private:
  void require_same_field(const QuadraticNumber& other) const;

  mpz_class d_;
  mpq_class x_;
  mpq_class y_;
};

/// (P + sqrt(D)) / Q with D > 0 non-square and Q != 0. Q < 0 encodes a negative surd coefficient.
class QuadraticSurd {
 public:
  QuadraticSurd(mpz_class P, mpz_class D, mpz_class Q);

  const mpz_class& P() const { return P_; }
  const mpz_class& D() const { return D_; }
  const mpz_class& Q() const { return Q_; }

  /// Same real number, compared by cross-multiplication.
  bool same_value(const QuadraticSurd& other) const;
  /// As an element of Q(sqrt D).
  QuadraticNumber to_field() const;
  /// As an element of Q(sqrt d); requires D = d s^2.
  QuadraticNumber to_field(const mpz_class& d) const;
  static QuadraticSurd from_field(const QuadraticNumber& z);
  Real to_real(Precision prec) const;

  friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;

 private:
  mpz_class P_;
  mpz_class D_;
  mpz_class Q_;
};

/// {P, D, Q}; integers outside the int64 range are written as decimal strings.
nlohmann::json surd_to_json(const QuadraticSurd& s);
QuadraticSurd surd_from_json(const nlohmann::json& j);

/// Field element equal to the value of the expansion.
QuadraticNumber value_of(const PeriodicCF& cf);

/// Exact surd of an eventually periodic expansion. For [0; (period)] this is the positive root
/// of q_l x^2 + (q_{l+1} - p_l) x - p_{l+1}; a preperiod maps that root through its convergent matrix.
QuadraticSurd surd_from_cf(const PeriodicCF& cf);

/// Evaluates {r alpha} for many r against one surd. Not thread-safe; copy per worker.
///
/// The surd is held at prec + 2 ceil(log2 r_max) + 32 + ceil(log2 |alpha|) bits. One log2 r
/// absorbs the integer part of r alpha; the second keeps prec relative bits when {r alpha} is
/// as small as 1/r, which happens at convergent denominators. The integer part is decided
/// exactly whenever the approximate value sits too close to an integer.
class FracEvaluator {
 public:
  FracEvaluator(const QuadraticSurd& surd, std::uint64_t r_max, Precision prec);

  /// out <- {r alpha} rounded to `prec` bits; out must already have the target precision.
  void eval(mpfr_ptr out, std::uint64_t r);
  Real operator()(std::uint64_t r);

  Precision precision() const { return prec_; }
  Precision working_precision() const { return work_; }

 private:
  QuadraticSurd surd_;
  std::uint64_t r_max_;
  Precision prec_;
  Precision work_;
  Real sqrt_d_;
  Real scratch_;
  Real floor_;
};

/// {r alpha} correct to `prec` bits (prec >= 32).
Real frac_r_alpha(const QuadraticSurd& s, std::uint64_t r, Precision prec);

/// Running fractional parts {alpha}, {2 alpha}, ... by repeated addition mod 1, carried at
/// prec + ceil(log2 n) + 32 bits so n steps of rounding stay below the target accuracy.
class IncrementalFrac {
 public:
  /// The first call to next() yields {(start + 1) alpha}.
  IncrementalFrac(const QuadraticSurd& surd, std::uint64_t n_max, Precision prec, std::uint64_t start = 0);

  /// Advances to the next r and writes {r alpha} into out.
  void next(mpfr_ptr out);
  std::uint64_t index() const { return r_; }

 private:
  Precision prec_;
  Real step_;
  Real state_;
  std::uint64_t r_ = 0;
};

/// ceil(log2 x) for x >= 1.
long ceil_log2(std::uint64_t x);

}  // namespace sudler::cf

template <>
struct nlohmann::adl_serializer<sudler::cf::QuadraticSurd> {
  static void to_json(json& j, const sudler::cf::QuadraticSurd& s) { j = sudler::cf::surd_to_json(s); }
  static sudler::cf::QuadraticSurd from_json(const json& j) { return sudler::cf::surd_from_json(j); }
};
