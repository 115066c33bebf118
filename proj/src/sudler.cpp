#include "sudler/sudler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sudler/errors.hpp"
#include "sudler/parallel.hpp"
#include "sudler/spectral.hpp"

namespace sudler::eval {

namespace {

constexpr std::uint64_t kChunk = 8192;

long exponent_of(mpfr_srcptr x) { return mpfr_zero_p(x) ? std::numeric_limits<long>::min() / 2 : mpfr_get_exp(x); }

// min({r alpha}, 1 - {r alpha}) keeps sin(pi x) away from the cancellation near pi.
void fold_half(mpfr_ptr f) {
  if (mpfr_cmp_d(f, 0.5) > 0) mpfr_ui_sub(f, 1, f, MPFR_RNDN);
}

struct ProductPart {
  Real value;
};

}  // namespace

void small_sin_cos(mpfr_ptr s, mpfr_ptr c, mpfr_srcptr x, mpfr_ptr term, mpfr_ptr x2) {
  if (mpfr_zero_p(x)) {
    mpfr_set_zero(s, 1);
    mpfr_set_ui(c, 1, MPFR_RNDN);
    return;
  }
  const long prec = static_cast<long>(mpfr_get_prec(s));
  mpfr_sqr(x2, x, MPFR_RNDN);
  // sin: x - x^3/3! + ...
  mpfr_set(term, x, MPFR_RNDN);
  mpfr_set(s, x, MPFR_RNDN);
  for (unsigned long i = 1;; ++i) {
    mpfr_mul(term, term, x2, MPFR_RNDN);
    mpfr_div_ui(term, term, (2 * i) * (2 * i + 1), MPFR_RNDN);
    mpfr_neg(term, term, MPFR_RNDN);
    mpfr_add(s, s, term, MPFR_RNDN);
    if (exponent_of(term) < exponent_of(s) - prec - 2) break;
  }
  // cos x = sqrt(1 - sin^2 x) loses nothing for |x| < pi/2.
  mpfr_sqr(c, s, MPFR_RNDN);
  mpfr_ui_sub(c, 1, c, MPFR_RNDN);
  mpfr_sqrt(c, c, MPFR_RNDN);
}

Real sudler_P(const QuadraticSurd& alpha, std::uint64_t n, Precision prec, FracMode mode) {
  if (n < 1) throw DomainError("sudler_P: n must be >= 1");
  const Precision work = prec + (cf::ceil_log2(n) + 16);
  const Real pi_w = pi(work);
  auto fold = [&](std::uint64_t lo, std::uint64_t hi) {
    ProductPart part{Real(1L, work)};
    if (lo >= hi) return part;
    Real f(work);
    Real arg(work);
    auto factor = [&] {
      fold_half(f.get());
      mpfr_mul(arg.get(), f.get(), pi_w.get(), MPFR_RNDN);
      mpfr_sin(arg.get(), arg.get(), MPFR_RNDN);
      mpfr_mul(part.value.get(), part.value.get(), arg.get(), MPFR_RNDN);
    };
    if (mode == FracMode::Direct) {
      cf::FracEvaluator ev(alpha, hi, work);
      for (std::uint64_t r = lo; r < hi; ++r) {
        ev.eval(f.get(), r);
        factor();
      }
    } else {
      cf::IncrementalFrac inc(alpha, hi, work, lo - 1);
      for (std::uint64_t r = lo; r < hi; ++r) {
        inc.next(f.get());
        factor();
      }
    }
    return part;
  };
  auto combine = [](ProductPart& a, ProductPart&& b) { a.value *= b.value; };
  ProductPart total = parallel::reduce<ProductPart>(1, n + 1, kChunk, fold, combine);
  mpfr_mul_2ui(total.value.get(), total.value.get(), n, MPFR_RNDN);
  return total.value.with_precision(prec);
}

Real sudler_Q(const PeriodicCF& cf, std::size_t n_index, Precision prec, FracMode mode) {
  if (n_index < 1) throw DomainError("sudler_Q: index must be >= 1");
  const mpz_class q = cf::denominator(cf, n_index);
  if (!mpz_fits_ulong_p(q.get_mpz_t())) throw BudgetExceeded("sudler_Q: q_n does not fit in 64 bits");
  return sudler_P(cf::surd_from_cf(cf), q.get_ui(), prec, mode);
}

namespace {

void require_real_bounds(const Real& x, const Real& y) {
  if (x < Real(1L, Precision(64))) throw DomainError("generalized sums start at x >= 1");
  if (y < x - Real(1L, x.precision())) throw DomainError("generalized sums need y >= x - 1");
}

// sum_{r=1}^{floor z} b_r + (z - floor z) b_{floor z + 1}, z >= 0.
Real partial_sum(const Sequence& b, const Real& z, Precision prec) {
  const Real fl = floor(z);
  const std::uint64_t top = mpfr_get_ui(fl.get(), MPFR_RNDN);
  Real sum(0L, prec);
  for (std::uint64_t r = 1; r <= top; ++r) sum += b(r);
  const Real w = z - fl;
  if (!w.is_zero()) sum += w * b(top + 1);
  return sum;
}

Real partial_prod(const Sequence& b, const Real& z, Precision prec) {
  const Real fl = floor(z);
  const std::uint64_t top = mpfr_get_ui(fl.get(), MPFR_RNDN);
  Real prod(1L, prec);
  auto positive = [](const Real& v) {
    if (v.sign() <= 0) throw DomainError("generalized product needs positive factors");
    return v;
  };
  for (std::uint64_t r = 1; r <= top; ++r) prod *= positive(b(r));
  const Real w = z - fl;
  if (!w.is_zero()) {
    Real edge = positive(b(top + 1));
    mpfr_pow(edge.get(), edge.get(), w.get(), MPFR_RNDN);
    prod *= edge;
  }
  return prod;
}

}  // namespace

Real gen_sum(const Sequence& b, const Real& x, const Real& y) {
  require_real_bounds(x, y);
  const Precision prec = std::max(x.precision(), y.precision());
  const Real lower = x - Real(1L, prec);
  return partial_sum(b, y, prec) - partial_sum(b, lower, prec);
}

Real gen_prod(const Sequence& b, const Real& x, const Real& y) {
  require_real_bounds(x, y);
  const Precision prec = std::max(x.precision(), y.precision());
  const Real lower = x - Real(1L, prec);
  return partial_prod(b, y, prec) / partial_prod(b, lower, prec);
}

namespace {

struct Setup {
  std::size_t n = 0;
  std::uint64_t q = 0;
  std::uint64_t q_prev = 0;
  mpz_class q_big;
  Real eb;  // |e_k b^m|
};

Setup setup(const PeriodicCF& cf, std::size_t m, std::size_t k, Precision work, std::uint64_t max_qn) {
  if (!cf.purely_periodic()) throw DomainError("decomposition needs a purely periodic expansion");
  const std::size_t l = cf.period_length();
  if (k >= l) throw DomainError("residue k must lie in 0..l-1");
  if (m < 2) throw DomainError("decomposition needs l m + k >= 2l");
  Setup s;
  s.n = l * m + k;
  const auto ct = cf::convergents(cf, s.n);
  s.q_big = ct.q(s.n);
  if (s.q_big > max_qn) {
    throw BudgetExceeded("q_" + std::to_string(s.n) + " = " + s.q_big.get_str() + " exceeds the budget " +
                         std::to_string(max_qn));
  }
  s.q = s.q_big.get_ui();
  s.q_prev = ct.q(s.n - 1).get_ui();
  const auto eb = spectral::exact_ek(cf, k) * spectral::exact_b(cf).pow(static_cast<unsigned>(m));
  s.eb = eb.abs().to_real(work);
  return s;
}

// {t q_{n-1}/q_n} - 1/2, from exact integer residues.
void xi_of(mpfr_ptr out, std::uint64_t t, std::uint64_t q_prev, std::uint64_t q) {
  const auto r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(t) * q_prev) % q);
  mpfr_set_si(out, static_cast<long>(2 * r) - static_cast<long>(q), MPFR_RNDN);
  mpfr_div_ui(out, out, 2 * q, MPFR_RNDN);
}

}  // namespace

PerturbedSineRow perturbed_row(const PeriodicCF& cf, std::size_t m, std::size_t k, std::uint64_t t, Precision prec) {
  const Precision work = prec + 64;
  const Setup s = setup(cf, m, k, work, std::numeric_limits<std::uint64_t>::max());
  if (t >= s.q) throw DomainError("perturbed_row: t must lie in [0, q_n)");
  PerturbedSineRow row;
  row.m = m;
  row.k = k;
  row.t = t;
  const Real pi_w = pi(work);
  Real xi(work);
  xi_of(xi.get(), t, s.q_prev, s.q);
  const Real ang = pi_w * Real(mpq_class(mpz_class(static_cast<unsigned long>(t)), mpz_class(static_cast<unsigned long>(s.q))), work);
  const Real delta = pi_w * s.eb * xi;
  row.s_mt = (sin(ang - delta) * 2L).with_precision(prec);
  row.xi_mt = xi.with_precision(prec);
  const auto sigma = cf::surd_from_cf(cf::sigma(cf, k));
  Real xi_inf = t == 0 ? Real(0L, work) : cf::frac_r_alpha(sigma, t, work);
  xi_inf -= Real(0.5, work);
  row.xi_inf_t = xi_inf.with_precision(prec);
  if (t == 0) {
    row.h_mt = Real(0L, prec);
    row.h_inf_t = Real(0L, prec);
  } else {
    row.h_mt = (cos(ang) / sin(ang) * sin(delta)).with_precision(prec);
    const Real ce = spectral::abs_ckek(cf, k, work);
    row.h_inf_t = (ce * xi_inf / Real(static_cast<long>(t), work)).with_precision(prec);
  }
  return row;
}

namespace {

struct DecompAcc {
  Real prodB;
  Real prodC;
  Real prodBstar;
  Real H1;
  Real H2;
  Real min_s;
  Real sym;
};

// One index t of the perturbed family, given sin and cos of pi t / q.
struct RowEval {
  explicit RowEval(Precision p)
      : xi(p), delta(p), sd(p), cd(p), h(p), s(p), bfac(p), term(p), x2(p), tmp(p), powh(p), series(p) {}

  void run(std::uint64_t t, std::uint64_t q_prev, std::uint64_t q, mpfr_srcptr pi_eb, mpfr_srcptr S, mpfr_srcptr C,
           mpfr_srcptr cot) {
    xi_of(xi.get(), t, q_prev, q);
    mpfr_mul(delta.get(), pi_eb, xi.get(), MPFR_RNDN);
    small_sin_cos(sd.get(), cd.get(), delta.get(), term.get(), x2.get());
    // s = 2 (S cos d - C sin d)
    mpfr_mul(s.get(), S, cd.get(), MPFR_RNDN);
    mpfr_mul(tmp.get(), C, sd.get(), MPFR_RNDN);
    mpfr_sub(s.get(), s.get(), tmp.get(), MPFR_RNDN);
    mpfr_mul_2ui(s.get(), s.get(), 1, MPFR_RNDN);
    // h = cot * sin d; s / (2 S) = cos d - h
    mpfr_mul(h.get(), cot, sd.get(), MPFR_RNDN);
    mpfr_sub(bfac.get(), cd.get(), h.get(), MPFR_RNDN);
  }

  // sum_{j>=2} h^j / j until the terms drop below the working precision.
  void higher_order() {
    mpfr_set_zero(series.get(), 1);
    if (mpfr_zero_p(h.get())) return;
    const long prec = static_cast<long>(mpfr_get_prec(series.get()));
    mpfr_set(powh.get(), h.get(), MPFR_RNDN);
    for (unsigned long j = 2;; ++j) {
      mpfr_mul(powh.get(), powh.get(), h.get(), MPFR_RNDN);
      mpfr_div_ui(tmp.get(), powh.get(), j, MPFR_RNDN);
      mpfr_add(series.get(), series.get(), tmp.get(), MPFR_RNDN);
      if (exponent_of(tmp.get()) < exponent_of(series.get()) - prec - 2) break;
    }
  }

  Real xi, delta, sd, cd, h, s, bfac, term, x2, tmp, powh, series;
};

}  // namespace

DecompositionTrace decompose(const PeriodicCF& cf, std::size_t m, std::size_t k, Precision prec,
                             const DecomposeOptions& options) {
  const Precision probe(64);
  Setup s0 = setup(cf, m, k, probe, options.max_qn);
  const std::uint64_t q = s0.q;
  const Precision work = prec + (cf::ceil_log2(q) + 24);
  const Setup s = setup(cf, m, k, work, options.max_qn);
  const std::uint64_t qp = s.q_prev;

  DecompositionTrace tr;
  tr.m = m;
  tr.k = k;
  tr.n = s.n;
  tr.q_n = s.q_big;

  const Real pi_w = pi(work);
  const Real pi_eb = pi_w * s.eb;
  // s_m0 = 2 sin(pi |e b^m| / 2)
  Real half_arg = pi_eb / 2L;
  const Real s_m0 = sin(half_arg) * 2L;
  const Real s_m0_sq = s_m0 * s_m0;
  {
    Real a = sin(pi_eb);
    a *= Real(s.q_big, work);
    a *= 2L;
    tr.A_m = abs(a);
  }

  const std::uint64_t half = (q - 1) / 2;  // lower half t = 1..half pairs with q - t

  auto fresh = [&] {
    return DecompAcc{Real(1L, work), Real(1L, work), Real(1L, work), Real(0L, work), Real(0L, work),
                     Real(std::numeric_limits<double>::infinity(), work), Real(0L, work)};
  };

  auto fold = [&](std::uint64_t lo, std::uint64_t hi) {
    DecompAcc acc = fresh();
    RowEval lower(work);
    RowEval upper(work);
    Real arg(work), S(work), C(work), Cneg(work), cot(work), one_minus(work), cfac(work), d(work);
    for (std::uint64_t t = lo; t < hi; ++t) {
      mpfr_mul_ui(arg.get(), pi_w.get(), t, MPFR_RNDN);
      mpfr_div_ui(arg.get(), arg.get(), q, MPFR_RNDN);
      mpfr_sin_cos(S.get(), C.get(), arg.get(), MPFR_RNDN);
      mpfr_div(cot.get(), C.get(), S.get(), MPFR_RNDN);
      lower.run(t, qp, q, pi_eb.get(), S.get(), C.get(), cot.get());
      mpfr_neg(Cneg.get(), C.get(), MPFR_RNDN);
      mpfr_neg(cot.get(), cot.get(), MPFR_RNDN);
      upper.run(q - t, qp, q, pi_eb.get(), S.get(), Cneg.get(), cot.get());

      for (RowEval* row : {&lower, &upper}) {
        mpfr_mul(acc.prodB.get(), acc.prodB.get(), row->bfac.get(), MPFR_RNDN);
        mpfr_ui_sub(one_minus.get(), 1, row->h.get(), MPFR_RNDN);
        mpfr_mul(acc.prodBstar.get(), acc.prodBstar.get(), one_minus.get(), MPFR_RNDN);
        mpfr_min(acc.min_s.get(), acc.min_s.get(), row->s.get(), MPFR_RNDN);
      }
      // 1 - s0^2 / s^2 over the lower half only.
      mpfr_sqr(cfac.get(), lower.s.get(), MPFR_RNDN);
      mpfr_div(cfac.get(), s_m0_sq.get(), cfac.get(), MPFR_RNDN);
      mpfr_ui_sub(cfac.get(), 1, cfac.get(), MPFR_RNDN);
      mpfr_mul(acc.prodC.get(), acc.prodC.get(), cfac.get(), MPFR_RNDN);
      mpfr_add(acc.H1.get(), acc.H1.get(), lower.h.get(), MPFR_RNDN);
      lower.higher_order();
      mpfr_add(acc.H2.get(), acc.H2.get(), lower.series.get(), MPFR_RNDN);

      mpfr_sub(d.get(), lower.s.get(), upper.s.get(), MPFR_RNDN);
      mpfr_abs(d.get(), d.get(), MPFR_RNDN);
      mpfr_sub(cfac.get(), lower.h.get(), upper.h.get(), MPFR_RNDN);
      mpfr_abs(cfac.get(), cfac.get(), MPFR_RNDN);
      mpfr_add(d.get(), d.get(), cfac.get(), MPFR_RNDN);
      mpfr_add(cfac.get(), lower.xi.get(), upper.xi.get(), MPFR_RNDN);
      mpfr_abs(cfac.get(), cfac.get(), MPFR_RNDN);
      mpfr_add(d.get(), d.get(), cfac.get(), MPFR_RNDN);
      mpfr_max(acc.sym.get(), acc.sym.get(), d.get(), MPFR_RNDN);
    }
    return acc;
  };
  auto combine = [](DecompAcc& a, DecompAcc&& b) {
    a.prodB *= b.prodB;
    a.prodC *= b.prodC;
    a.prodBstar *= b.prodBstar;
    a.H1 += b.H1;
    a.H2 += b.H2;
    a.min_s = a.min_s < b.min_s ? a.min_s : b.min_s;
    a.sym = max(a.sym, b.sym);
  };
  DecompAcc acc = parallel::reduce<DecompAcc>(1, half + 1, kChunk, fold, combine);

  if (q % 2 == 0) {
    // t = q/2 pairs with itself: one factor in the full products, half weight in the folded ones.
    const Real one(1L, work);
    const Real zero(0L, work);
    RowEval mid(work);
    mid.run(q / 2, qp, q, pi_eb.get(), one.get(), zero.get(), zero.get());
    acc.prodB *= mid.bfac;
    acc.prodBstar *= one - mid.h;
    acc.min_s = acc.min_s < mid.s ? acc.min_s : mid.s;
    Real cm = one - s_m0_sq / (mid.s * mid.s);
    acc.prodC *= sqrt(cm);
    acc.H1 += mid.h / 2L;
    mid.higher_order();
    acc.H2 += mid.series / 2L;
  }

  tr.B_m = abs(acc.prodB).with_precision(prec);
  tr.C_m = acc.prodC.with_precision(prec);
  tr.A_m.set_precision(prec);
  tr.log_Bstar = log(acc.prodBstar).with_precision(prec);
  tr.H1 = acc.H1.with_precision(prec);
  tr.H2 = acc.H2.with_precision(prec);
  tr.s_m0 = s_m0.with_precision(prec);
  tr.min_s = acc.min_s.with_precision(prec);
  tr.symmetry_defect = acc.sym.with_precision(prec);

  // Each of A, B, C and Q carries at most a few ulps per factor at the working precision.
  tr.residual_bound = Real(1L, prec);
  mpfr_mul_2si(tr.residual_bound.get(), tr.residual_bound.get(), -(prec.bits - 8), MPFR_RNDN);
  if (options.with_direct) {
    const Real direct = sudler_P(cf::surd_from_cf(cf), q, prec + 16L);
    tr.Q_direct = direct.with_precision(prec);
    const Real abc = tr.A_m.with_precision(work) * abs(acc.prodB) * acc.prodC;
    tr.rel_residual = abs(abc / direct.with_precision(work) - Real(1L, work)).with_precision(prec);
    if (tr.rel_residual > tr.residual_bound) {
      throw IdentityViolation("A_m B_m C_m differs from Q_" + std::to_string(s.n) + " by " +
                              tr.rel_residual.to_string(6) + ", above the bound " + tr.residual_bound.to_string(3));
    }
  } else {
    tr.Q_direct = Real(prec);
    mpfr_set_nan(tr.Q_direct.get());
    tr.rel_residual = Real(prec);
    mpfr_set_nan(tr.rel_residual.get());
  }
  return tr;
}

}  // namespace sudler::eval
