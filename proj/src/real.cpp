#include "sudler/real.hpp"

#include <memory>
#include <stdexcept>

namespace sudler {

namespace {

mpfr_prec_t clamp_prec(Precision p) {
  return p.bits < MPFR_PREC_MIN ? MPFR_PREC_MIN : static_cast<mpfr_prec_t>(p.bits);
}

struct MpfrString {
  char* ptr = nullptr;
  ~MpfrString() {
    if (ptr != nullptr) mpfr_free_str(ptr);
  }
};

}  // namespace

Real::Real(Precision prec) {
  mpfr_init2(value_, clamp_prec(prec));
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Precision prec) : Real(prec) { mpfr_set_si(value_, value, MPFR_RNDN); }

Real::Real(double value, Precision prec) : Real(prec) { mpfr_set_d(value_, value, MPFR_RNDN); }

Real::Real(const mpz_class& value, Precision prec) : Real(prec) {
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class& value, Precision prec) : Real(prec) {
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

void Real::set_precision(Precision prec) { mpfr_prec_round(value_, clamp_prec(prec), MPFR_RNDN); }

Real Real::with_precision(Precision prec) const {
  Real out(prec);
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

std::string Real::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  MpfrString s;
  if (mpfr_asprintf(&s.ptr, "%.*Re", digits - 1, value_) < 0) throw std::runtime_error("mpfr_asprintf failed");
  return s.ptr;
}

std::string Real::to_hex() const {
  MpfrString s;
  if (mpfr_asprintf(&s.ptr, "%Ra", value_) < 0) throw std::runtime_error("mpfr_asprintf failed");
  return s.ptr;
}

Real Real::parse(std::string_view text, Precision prec) {
  Real out(prec);
  std::string buf(text);
  char* end = nullptr;
  mpfr_strtofr(out.value_, buf.c_str(), &end, 0, MPFR_RNDN);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw std::invalid_argument("not a floating-point literal: '" + buf + "'");
  }
  return out;
}

Real& Real::operator+=(const Real& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real out(*this);
  mpfr_neg(out.value_, out.value_, MPFR_RNDN);
  return out;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

#define SUDLER_UNARY(name, fn)              \
  Real name(const Real& x) {                \
    Real out(x.precision());                \
    fn(out.get(), x.get(), MPFR_RNDN);      \
    return out;                             \
  }

SUDLER_UNARY(abs, mpfr_abs)
SUDLER_UNARY(sqrt, mpfr_sqrt)
SUDLER_UNARY(sin, mpfr_sin)
SUDLER_UNARY(cos, mpfr_cos)
SUDLER_UNARY(log, mpfr_log)
SUDLER_UNARY(log1p, mpfr_log1p)
SUDLER_UNARY(exp, mpfr_exp)

#undef SUDLER_UNARY

Real floor(const Real& x) {
  Real out(x.precision());
  mpfr_floor(out.get(), x.get());
  return out;
}

Real frac(const Real& x) {
  Real fl(x.precision());
  mpfr_floor(fl.get(), x.get());
  Real out(x.precision());
  mpfr_sub(out.get(), x.get(), fl.get(), MPFR_RNDN);
  return out;
}

Real pow(const Real& x, long n) {
  Real out(x.precision());
  mpfr_pow_si(out.get(), x.get(), n, MPFR_RNDN);
  return out;
}

Real pi(Precision prec) {
  Real out(prec);
  mpfr_const_pi(out.get(), MPFR_RNDN);
  return out;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }

}  // namespace sudler
