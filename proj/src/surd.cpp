#include "sudler/surd.hpp"

#include <bit>
#include <cstdint>
#include <limits>

#include "sudler/errors.hpp"

namespace sudler::cf {

namespace {

bool is_square(const mpz_class& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

}  // namespace

long ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<long>(std::bit_width(x - 1));
}

// ---- QuadraticNumber

QuadraticNumber::QuadraticNumber(mpz_class d, mpq_class x, mpq_class y)
    : d_(std::move(d)), x_(std::move(x)), y_(std::move(y)) {
  if (d_ <= 0 || is_square(d_)) throw DomainError("quadratic field radicand must be a positive non-square");
  x_.canonicalize();
  y_.canonicalize();
}

void QuadraticNumber::require_same_field(const QuadraticNumber& other) const {
  if (d_ != other.d_) throw DomainError("quadratic numbers live in different fields");
}

int QuadraticNumber::sign() const {
  const int sx = sgn(x_);
  const int sy = sgn(y_);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  // Opposite signs: compare x^2 with d y^2.
  const int c = cmp(x_ * x_, mpq_class(d_) * y_ * y_);
  return c > 0 ? sx : sy;
}

QuadraticNumber QuadraticNumber::pow(unsigned n) const {
  QuadraticNumber result = rational(d_, 1);
  QuadraticNumber base = *this;
  while (n > 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n > 0) base *= base;
  }
  return result;
}

Real QuadraticNumber::to_real(Precision prec) const {
  // Cancellation between the two parts costs at most the bits of the larger part, so
  // evaluate with headroom proportional to the operand sizes.
  const long extra = 32 + static_cast<long>(mpz_sizeinbase(x_.get_num_mpz_t(), 2)) +
                     static_cast<long>(mpz_sizeinbase(y_.get_num_mpz_t(), 2)) +
                     static_cast<long>(mpz_sizeinbase(d_.get_mpz_t(), 2));
  const Precision work = prec + extra;
  Real root = sqrt(Real(d_, work));
  root *= Real(y_, work);
  root += Real(x_, work);
  return root.with_precision(prec);
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& rhs) {
  require_same_field(rhs);
  x_ += rhs.x_;
  y_ += rhs.y_;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& rhs) {
  require_same_field(rhs);
  x_ -= rhs.x_;
  y_ -= rhs.y_;
  return *this;
}

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& rhs) {
  require_same_field(rhs);
  mpq_class x = x_ * rhs.x_ + mpq_class(d_) * y_ * rhs.y_;
  mpq_class y = x_ * rhs.y_ + y_ * rhs.x_;
  x_ = std::move(x);
  y_ = std::move(y);
  return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& rhs) {
  require_same_field(rhs);
  const mpq_class n = rhs.norm();
  if (sgn(n) == 0) throw DomainError("division by zero in quadratic field");
  *this *= rhs.conjugate();
  x_ /= n;
  y_ /= n;
  return *this;
}

// ---- QuadraticSurd

QuadraticSurd::QuadraticSurd(mpz_class P, mpz_class D, mpz_class Q)
    : P_(std::move(P)), D_(std::move(D)), Q_(std::move(Q)) {
  if (D_ <= 0 || is_square(D_)) throw DomainError("surd radicand must be a positive non-square");
  if (Q_ == 0) throw DomainError("surd denominator must be non-zero");
}

bool QuadraticSurd::same_value(const QuadraticSurd& o) const {
  // (P1 + sqrt D1)/Q1 = (P2 + sqrt D2)/Q2 iff P1 Q2 = P2 Q1 and D1 Q2^2 = D2 Q1^2 with
  // matching signs of the surd coefficients.
  if (P_ * o.Q_ != o.P_ * Q_) return false;
  if (D_ * o.Q_ * o.Q_ != o.D_ * Q_ * Q_) return false;
  return sgn(Q_) == sgn(o.Q_);
}

QuadraticNumber QuadraticSurd::to_field() const { return {D_, mpq_class(P_, Q_), mpq_class(1, Q_)}; }

QuadraticNumber QuadraticSurd::to_field(const mpz_class& d) const {
  if (D_ % d != 0 || !is_square(D_ / d)) throw DomainError("surd radicand is not d times a square");
  const mpz_class s = isqrt(D_ / d);
  return {d, mpq_class(P_, Q_), mpq_class(s, Q_)};
}

QuadraticSurd QuadraticSurd::from_field(const QuadraticNumber& z) {
  const mpq_class& x = z.rational_part();
  const mpq_class& y = z.surd_part();
  if (sgn(y) == 0) throw DomainError("rational number has no surd form");
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), x.get_den_mpz_t(), y.get_den_mpz_t());
  const mpz_class Q = sgn(y) * l;
  const mpq_class qy = y * Q;  // positive integer
  const mpq_class qx = x * Q;
  return {qx.get_num(), qy.get_num() * qy.get_num() * z.radicand(), Q};
}

Real QuadraticSurd::to_real(Precision prec) const {
  const Precision work = prec + 16 + static_cast<long>(mpz_sizeinbase(P_.get_mpz_t(), 2));
  Real v = sqrt(Real(D_, work));
  v += Real(P_, work);
  v /= Real(Q_, work);
  return v.with_precision(prec);
}

namespace {

nlohmann::json int_to_json(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t()) != 0) return v.get_si();
  return v.get_str();
}

mpz_class int_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(std::to_string(j.get<long long>()));
  if (j.is_string()) return mpz_class(j.get<std::string>());
  throw DomainError("surd JSON field must be an integer or a decimal string");
}

}  // namespace

nlohmann::json surd_to_json(const QuadraticSurd& s) {
  return {{"P", int_to_json(s.P())}, {"D", int_to_json(s.D())}, {"Q", int_to_json(s.Q())}};
}

QuadraticSurd surd_from_json(const nlohmann::json& j) {
  return {int_from_json(j.at("P")), int_from_json(j.at("D")), int_from_json(j.at("Q"))};
}

// ---- surd of a continued fraction

namespace {

// Positive root of q_l x^2 + (q_{l+1} - p_l) x - p_{l+1} for the purely periodic tail.
QuadraticSurd tail_surd(const PeriodicCF& cf) {
  const PeriodicCF t = cf.tail();
  const std::size_t l = t.period_length();
  const ConvergentTable ct = convergents(t, l + 1);
  const mpz_class B = ct.q(l + 1) - ct.p(l);
  const mpz_class D = B * B + 4 * ct.q(l) * ct.p(l + 1);
  return {-B, D, 2 * ct.q(l)};
}

}  // namespace

QuadraticNumber value_of(const PeriodicCF& cf) {
  const QuadraticSurd alpha = tail_surd(cf);
  const QuadraticNumber a = alpha.to_field();
  if (cf.purely_periodic()) return a;
  // beta = (p_{h+1} + alpha p_h) / (q_{h+1} + alpha q_h) with beta's own convergents.
  const PeriodicCF head(cf.a0(), cf.preperiod(), cf.period());
  const std::size_t h = cf.preperiod_length();
  const ConvergentTable ct = convergents(head, h + 1);
  const QuadraticNumber num = a * mpq_class(ct.p(h)) + mpq_class(ct.p(h + 1));
  const QuadraticNumber den = a * mpq_class(ct.q(h)) + mpq_class(ct.q(h + 1));
  return num / den;
}

QuadraticSurd surd_from_cf(const PeriodicCF& cf) {
  if (cf.purely_periodic()) return tail_surd(cf);
  return QuadraticSurd::from_field(value_of(cf));
}

// ---- fractional parts

namespace {

long magnitude_bits(const QuadraticSurd& s) {
  const mpz_class top = abs(s.P()) + isqrt(s.D()) + 1;
  const long diff = static_cast<long>(mpz_sizeinbase(top.get_mpz_t(), 2)) -
                    static_cast<long>(mpz_sizeinbase(s.Q().get_mpz_t(), 2)) + 1;
  return diff > 0 ? diff : 0;
}

// floor((rP + r sqrt D)/Q), exactly.
mpz_class exact_floor(const QuadraticSurd& s, std::uint64_t r) {
  const mpz_class rr(static_cast<unsigned long>(r));
  const mpz_class N = rr * s.P() + isqrt(rr * rr * s.D());
  mpz_class f;
  if (s.Q() > 0) {
    mpz_fdiv_q(f.get_mpz_t(), N.get_mpz_t(), s.Q().get_mpz_t());
    return f;
  }
  const mpz_class aq = -s.Q();
  mpz_fdiv_q(f.get_mpz_t(), N.get_mpz_t(), aq.get_mpz_t());
  return -(f + 1);
}

}  // namespace

FracEvaluator::FracEvaluator(const QuadraticSurd& surd, std::uint64_t r_max, Precision prec)
    : surd_(surd),
      r_max_(r_max),
      prec_(prec),
      work_(prec + (2 * ceil_log2(r_max) + 32 + magnitude_bits(surd))),
      sqrt_d_(sqrt(Real(surd.D(), work_))),
      scratch_(work_),
      floor_(work_) {
  if (prec.bits < 32) throw DomainError("fractional parts need at least 32 bits");
}

void FracEvaluator::eval(mpfr_ptr out, std::uint64_t r) {
  if (r > r_max_) throw DomainError("FracEvaluator: r exceeds the bound it was built for");
  mpz_class rp = surd_.P();
  mpz_mul_ui(rp.get_mpz_t(), rp.get_mpz_t(), static_cast<unsigned long>(r));
  mpfr_mul_ui(scratch_.get(), sqrt_d_.get(), static_cast<unsigned long>(r), MPFR_RNDN);
  mpfr_add_z(scratch_.get(), scratch_.get(), rp.get_mpz_t(), MPFR_RNDN);
  mpfr_div_z(scratch_.get(), scratch_.get(), surd_.Q().get_mpz_t(), MPFR_RNDN);
  mpfr_floor(floor_.get(), scratch_.get());
  mpfr_sub(out, scratch_.get(), floor_.get(), MPFR_RNDN);
  // Within a few ulps of an integer the approximate floor is not trustworthy.
  const mpfr_exp_t guard = -static_cast<mpfr_exp_t>(prec_.bits + 8);
  const bool near_zero = mpfr_zero_p(out) != 0 || mpfr_get_exp(out) < guard;
  bool near_one = false;
  if (!near_zero) {
    mpfr_ui_sub(floor_.get(), 1, out, MPFR_RNDN);
    near_one = mpfr_zero_p(floor_.get()) != 0 || mpfr_get_exp(floor_.get()) < guard;
  }
  if (near_zero || near_one) {
    const mpz_class f = exact_floor(surd_, r);
    mpfr_sub_z(out, scratch_.get(), f.get_mpz_t(), MPFR_RNDN);
  }
}

Real FracEvaluator::operator()(std::uint64_t r) {
  Real out(prec_);
  eval(out.get(), r);
  return out;
}

Real frac_r_alpha(const QuadraticSurd& s, std::uint64_t r, Precision prec) {
  FracEvaluator ev(s, r, prec);
  return ev(r);
}

IncrementalFrac::IncrementalFrac(const QuadraticSurd& surd, std::uint64_t n_max, Precision prec, std::uint64_t start)
    : prec_(prec), step_(prec), state_(prec), r_(start) {
  const Precision work = prec + (ceil_log2(n_max) + 32);
  step_ = frac_r_alpha(surd, 1, work);
  state_ = start == 0 ? Real(0L, work) : FracEvaluator(surd, start, work)(start);
}

void IncrementalFrac::next(mpfr_ptr out) {
  mpfr_add(state_.get(), state_.get(), step_.get(), MPFR_RNDN);
  if (mpfr_cmp_ui(state_.get(), 1) >= 0) mpfr_sub_ui(state_.get(), state_.get(), 1, MPFR_RNDN);
  ++r_;
  mpfr_set(out, state_.get(), MPFR_RNDN);
}

}  // namespace sudler::cf
