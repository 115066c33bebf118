#include "sudler/limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "sudler/errors.hpp"
#include "sudler/parallel.hpp"
#include "sudler/spectral.hpp"
#include "sudler/surd.hpp"

namespace sudler::limits {

namespace {

constexpr std::uint64_t kChunk = 16384;

// Distinct convergent denominators of alpha_sigma_k up to T, ascending.
std::vector<std::uint64_t> ostrowski_base(const PeriodicCF& cf, std::uint64_t T) {
  std::vector<std::uint64_t> base;
  for (std::size_t n = 1;; ++n) {
    const mpz_class q = cf::denominator(cf, n);
    if (q > T) break;
    const std::uint64_t v = q.get_ui();
    if (base.empty() || base.back() != v) base.push_back(v);
  }
  return base;
}

// Greedy digit sum; greedy digits are the admissible Ostrowski digits.
std::uint64_t digit_sum(std::uint64_t t, const std::vector<std::uint64_t>& base) {
  std::uint64_t sum = 0;
  for (auto it = base.rbegin(); it != base.rend() && t > 0; ++it) {
    sum += t / *it;
    t %= *it;
  }
  return sum;
}

struct SeriesAcc {
  Real prodC;
  Real sum_inv_u2;
  Real min_u;
  Real xi_sum;
  Real w_sum;
  Real wL;
  Real maxL;
  Real minL;
  Real maxLmB;
  Real minLpB;
  Real prod_1mh;
  Real sum_h;
};

struct Series {
  Real x;  // |c_k e_k|
  SeriesAcc acc;
  std::vector<std::uint64_t> base;
  std::uint64_t T = 0;
};

// One sweep over t = 1..T. Chunks carry local prefix sums L_t of xi; combining shifts the
// right chunk by the left chunk's total, so S_t never needs a sequential pass.
Series series_pass(const PeriodicCF& cf, std::size_t k, std::uint64_t T, Precision prec) {
  if (!cf.purely_periodic()) throw DomainError("limits need a purely periodic expansion");
  if (k >= cf.period_length()) throw DomainError("residue k must lie in 0..l-1");
  if (T < 1) throw DomainError("truncation T must be >= 1");
  const Precision work = prec + (cf::ceil_log2(T) + 32);
  const PeriodicCF rev = cf::sigma(cf, k);
  const auto alpha = cf::surd_from_cf(rev);
  Series out;
  out.T = T;
  out.x = spectral::abs_ckek(cf, k, work);
  out.base = ostrowski_base(rev, T);
  const Real& x = out.x;
  const Real inf(std::numeric_limits<double>::infinity(), work);
  const Real ninf(-std::numeric_limits<double>::infinity(), work);

  auto fold = [&](std::uint64_t lo, std::uint64_t hi) {
    SeriesAcc a{Real(1L, work), Real(0L, work), inf, Real(0L, work), Real(0L, work), Real(0L, work),
                ninf, inf, ninf, inf, Real(1L, work), Real(0L, work)};
    if (lo >= hi) return a;
    cf::IncrementalFrac frac(alpha, hi, work, lo - 1);
    Real xi(work), u(work), v(work), w(work), h(work), bound(work);
    for (std::uint64_t t = lo; t < hi; ++t) {
      frac.next(xi.get());
      mpfr_sub_d(xi.get(), xi.get(), 0.5, MPFR_RNDN);
      // u = 2 (t / x - xi)
      mpfr_ui_div(u.get(), 1, x.get(), MPFR_RNDN);
      mpfr_mul_ui(u.get(), u.get(), t, MPFR_RNDN);
      mpfr_sub(u.get(), u.get(), xi.get(), MPFR_RNDN);
      mpfr_mul_2ui(u.get(), u.get(), 1, MPFR_RNDN);
      mpfr_min(a.min_u.get(), a.min_u.get(), u.get(), MPFR_RNDN);
      mpfr_sqr(v.get(), u.get(), MPFR_RNDN);
      mpfr_ui_div(v.get(), 1, v.get(), MPFR_RNDN);
      mpfr_add(a.sum_inv_u2.get(), a.sum_inv_u2.get(), v.get(), MPFR_RNDN);
      mpfr_ui_sub(v.get(), 1, v.get(), MPFR_RNDN);
      mpfr_mul(a.prodC.get(), a.prodC.get(), v.get(), MPFR_RNDN);

      mpfr_add(a.xi_sum.get(), a.xi_sum.get(), xi.get(), MPFR_RNDN);
      mpfr_set_ui(w.get(), t, MPFR_RNDN);
      mpfr_mul_ui(w.get(), w.get(), t + 1, MPFR_RNDN);
      mpfr_ui_div(w.get(), 1, w.get(), MPFR_RNDN);
      mpfr_add(a.w_sum.get(), a.w_sum.get(), w.get(), MPFR_RNDN);
      mpfr_mul(w.get(), w.get(), a.xi_sum.get(), MPFR_RNDN);
      mpfr_add(a.wL.get(), a.wL.get(), w.get(), MPFR_RNDN);
      mpfr_max(a.maxL.get(), a.maxL.get(), a.xi_sum.get(), MPFR_RNDN);
      mpfr_min(a.minL.get(), a.minL.get(), a.xi_sum.get(), MPFR_RNDN);
      mpfr_set_ui(bound.get(), 3 * digit_sum(t, out.base), MPFR_RNDN);
      mpfr_div_2ui(bound.get(), bound.get(), 1, MPFR_RNDN);
      mpfr_sub(w.get(), a.xi_sum.get(), bound.get(), MPFR_RNDN);
      mpfr_max(a.maxLmB.get(), a.maxLmB.get(), w.get(), MPFR_RNDN);
      mpfr_add(w.get(), a.xi_sum.get(), bound.get(), MPFR_RNDN);
      mpfr_min(a.minLpB.get(), a.minLpB.get(), w.get(), MPFR_RNDN);

      // h = x xi / t
      mpfr_mul(h.get(), x.get(), xi.get(), MPFR_RNDN);
      mpfr_div_ui(h.get(), h.get(), t, MPFR_RNDN);
      mpfr_add(a.sum_h.get(), a.sum_h.get(), h.get(), MPFR_RNDN);
      mpfr_ui_sub(h.get(), 1, h.get(), MPFR_RNDN);
      mpfr_mul(a.prod_1mh.get(), a.prod_1mh.get(), h.get(), MPFR_RNDN);
    }
    return a;
  };
  auto combine = [](SeriesAcc& a, SeriesAcc&& b) {
    a.prodC *= b.prodC;
    a.sum_inv_u2 += b.sum_inv_u2;
    a.min_u = a.min_u < b.min_u ? a.min_u : b.min_u;
    a.wL += b.wL + a.xi_sum * b.w_sum;
    a.maxL = max(a.maxL, a.xi_sum + b.maxL);
    const Real shifted_min = a.xi_sum + b.minL;
    a.minL = a.minL < shifted_min ? a.minL : shifted_min;
    a.maxLmB = max(a.maxLmB, a.xi_sum + b.maxLmB);
    const Real shifted = a.xi_sum + b.minLpB;
    a.minLpB = a.minLpB < shifted ? a.minLpB : shifted;
    a.xi_sum += b.xi_sum;
    a.w_sum += b.w_sum;
    a.prod_1mh *= b.prod_1mh;
    a.sum_h += b.sum_h;
  };
  out.acc = parallel::reduce<SeriesAcc>(1, T + 1, kChunk, fold, combine);
  return out;
}

CProduct c_from(const Series& s, Precision prec) {
  const Precision work = s.x.precision();
  CProduct c;
  // sum_{t>T} 1/u_t^2 <= sum_{t>T} 1/(4 (t/x - 1/2)^2) <= x / (4 (T/x - 1/2))
  Real tail = s.x / ((Real(static_cast<long>(s.T), work) / s.x - Real(0.5, work)) * 4L);
  c.value = s.acc.prodC.with_precision(prec);
  c.tail_bound = tail.with_precision(prec);
  c.lower = (s.acc.prodC * (Real(1L, work) - tail)).with_precision(prec);
  c.sum_inv_u2 = s.acc.sum_inv_u2.with_precision(prec);
  c.min_u = s.acc.min_u.with_precision(prec);
  return c;
}

// First t with |S_t| >= (3/2) digit_sum(t), found sequentially; only runs after a failed check.
std::uint64_t locate_prefix_violation(const PeriodicCF& cf, std::size_t k, const Series& s) {
  const Precision work = s.x.precision();
  cf::IncrementalFrac frac(cf::surd_from_cf(cf::sigma(cf, k)), s.T, work);
  Real xi(work);
  Real S(0L, work);
  for (std::uint64_t t = 1; t <= s.T; ++t) {
    frac.next(xi.get());
    S += xi - Real(0.5, work);
    const Real bound(static_cast<long>(3 * digit_sum(t, s.base)) / 2.0, work);
    if (!(abs(S) < bound)) return t;
  }
  return 0;
}

Gamma1 g1_from(const PeriodicCF& cf, std::size_t k, const Series& s, Precision prec) {
  const Precision work = s.x.precision();
  Gamma1 g;
  g.value = (s.x * s.acc.wL).with_precision(prec);
  const Real max_abs = max(abs(s.acc.maxL), abs(s.acc.minL));
  g.max_abs_prefix = max_abs.with_precision(prec);
  const Real T(static_cast<long>(s.T), work);
  const Real K = max_abs / log(T + Real(1L, work));
  g.tail_estimate = (s.x * K * (log(T) + Real(1L, work)) / T).with_precision(prec);
  g.prefix_bound_ok = s.acc.maxLmB.sign() < 0 && s.acc.minLpB.sign() > 0;
  if (!g.prefix_bound_ok) g.first_prefix_violation = locate_prefix_violation(cf, k, s);
  return g;
}

Gamma2 g2_from(const Series& s, Precision prec) {
  Gamma2 g;
  g.value = (-log(s.acc.prod_1mh) - s.acc.sum_h).with_precision(prec);
  g.tail_bound = Real(1L, prec) / Real(static_cast<long>(2 * s.T), prec);
  return g;
}

}  // namespace

Real limit_A(const PeriodicCF& cf, std::size_t k, Precision prec) {
  const Precision work = prec + 16;
  return (pi(work) * spectral::abs_ckek(cf, k, work) * 2L).with_precision(prec);
}

CProduct limit_C(const PeriodicCF& cf, std::size_t k, std::uint64_t T, Precision prec) {
  return c_from(series_pass(cf, k, T, prec), prec);
}

Gamma1 gamma1(const PeriodicCF& cf, std::size_t k, std::uint64_t T, Precision prec) {
  return g1_from(cf, k, series_pass(cf, k, T, prec), prec);
}

Gamma2 gamma2(const PeriodicCF& cf, std::size_t k, std::uint64_t T, Precision prec) {
  return g2_from(series_pass(cf, k, T, prec), prec);
}

Real limit_B(const Real& g1, const Real& g2) { return exp((g1 + g2) * -2L); }

LimitReport limit_Ck(const PeriodicCF& cf, std::size_t k, const LimitOptions& options) {
  const Precision prec = options.prec;
  const Series s = series_pass(cf, k, options.T, prec);
  const CProduct c = c_from(s, prec);
  const Gamma1 g1 = g1_from(cf, k, s, prec);
  const Gamma2 g2 = g2_from(s, prec);
  LimitReport r;
  r.k = k;
  r.T = options.T;
  r.A_lim = limit_A(cf, k, prec);
  r.C_lim = c.value;
  r.C_lower = c.lower;
  r.gamma1 = g1.value;
  r.gamma2 = g2.value;
  r.B_lim = limit_B(g1.value, g2.value);
  r.C_k = r.A_lim * r.B_lim * r.C_lim;
  // C may sit below the partial product by a factor (1 - A); B moves by at most exp(2 (tail1 + tail2)) - 1.
  const Real one(1L, prec);
  const Real relC = c.tail_bound / (one - c.tail_bound);
  const Real relB = exp((g1.tail_estimate + g2.tail_bound) * 2L) - one;
  r.tail_bound = r.C_k * (relC + relB);
  r.sum_inv_u2 = c.sum_inv_u2;
  r.prefix_bound_ok = g1.prefix_bound_ok;
  return r;
}

nlohmann::json to_json(const LimitReport& r, int digits) {
  return {{"k", r.k},
          {"A_lim", r.A_lim.to_string(digits)},
          {"gamma1", r.gamma1.to_string(digits)},
          {"gamma2", r.gamma2.to_string(digits)},
          {"B_lim", r.B_lim.to_string(digits)},
          {"C_lim", r.C_lim.to_string(digits)},
          {"C_lim_lower", r.C_lower.to_string(digits)},
          {"C_k", r.C_k.to_string(digits)},
          {"T", r.T},
          {"tail_bound", r.tail_bound.to_string(6)},
          {"sum_inv_u2", r.sum_inv_u2.to_string(digits)},
          {"prefix_bound_ok", r.prefix_bound_ok},
          {"gamma1_tail", "heuristic C log T / T"}};
}

bool sumfrac_check(const PeriodicCF& cf, const Real& theta, std::uint64_t v, std::uint64_t q) {
  if (v < 1) throw DomainError("sumfrac_check: v must be >= 1");
  bool found = false;
  for (std::size_t n = 1;; ++n) {
    const mpz_class qn = cf::denominator(cf, n);
    if (qn == q) found = true;
    if (found || qn > q) break;
  }
  if (!found) throw DomainError("sumfrac_check: " + std::to_string(q) + " is not a convergent denominator");
  const std::uint64_t N = v * q;
  const Precision work = theta.precision() + (cf::ceil_log2(N) + 32);
  cf::IncrementalFrac steps(cf::surd_from_cf(cf), N, work);
  const Real th = sudler::frac(theta.with_precision(work));
  Real f(work);
  Real sum(0L, work);
  for (std::uint64_t i = 1; i <= N; ++i) {
    steps.next(f.get());
    mpfr_add(f.get(), f.get(), th.get(), MPFR_RNDN);
    if (mpfr_cmp_ui(f.get(), 1) >= 0) mpfr_sub_ui(f.get(), f.get(), 1, MPFR_RNDN);
    mpfr_sub_d(f.get(), f.get(), 0.5, MPFR_RNDN);
    sum += f;
  }
  const Real bound(1.5 * static_cast<double>(v), work);
  return abs(sum) < bound;
}

}  // namespace sudler::limits
