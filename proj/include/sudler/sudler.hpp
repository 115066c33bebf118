// Sine products P_n, Q_n and the finite-m factorisation Q_{lm+k} = A_m B_m C_m.
#pragma once

#include <cstdint>
#include <functional>

#include "sudler/cf.hpp"
#include "sudler/real.hpp"
#include "sudler/surd.hpp"

namespace sudler::eval {

using cf::PeriodicCF;
using cf::QuadraticSurd;

enum class FracMode { Direct, Incremental };

/// prod_{r=1}^{n} |2 sin(pi r alpha)|.
///
/// Factors are multiplied in MPFR's exponent range (no overflow below 2^(2^62)), at
/// prec + ceil(log2 n) + 16 bits, in fixed chunks combined by a fixed tree.
Real sudler_P(const QuadraticSurd& alpha, std::uint64_t n, Precision prec, FracMode mode = FracMode::Direct);

/// P_{q_n}(alpha) for the expansion's own q_n.
Real sudler_Q(const PeriodicCF& cf, std::size_t n_index, Precision prec, FracMode mode = FracMode::Direct);

/// Sum of b_x..b_y for real bounds 1 <= x, x - 1 <= y: the integral over [x-1, y] of the step
/// function equal to b_r on (r-1, r]. Integer bounds give the ordinary sum (y = x - 1 is empty),
/// and a fractional upper bound weights b_{floor(y)+1} by y - floor(y).
using Sequence = std::function<Real(std::uint64_t)>;
Real gen_sum(const Sequence& b, const Real& x, const Real& y);
/// exp of gen_sum of log b, evaluated as a product with a fractional power on the edge factors.
Real gen_prod(const Sequence& b, const Real& x, const Real& y);

struct PerturbedSineRow {
  std::size_t m = 0;
  std::size_t k = 0;
  std::uint64_t t = 0;
  Real s_mt;
  Real xi_mt;
  Real xi_inf_t;
  Real h_mt;
  /// Zero at t = 0 where it is undefined.
  Real h_inf_t;
};

/// The five sequences at one index t, 0 <= t < q_{lm+k}.
PerturbedSineRow perturbed_row(const PeriodicCF& cf, std::size_t m, std::size_t k, std::uint64_t t, Precision prec);

struct DecomposeOptions {
  std::uint64_t max_qn = 2'000'000;
  /// Also evaluate Q directly (the dominant cost when only the factors are wanted).
  bool with_direct = true;
};

struct DecompositionTrace {
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  mpz_class q_n;
  Real A_m;
  Real B_m;
  Real C_m;
  Real Q_direct;
  /// |A B C / Q_direct - 1|; NaN when Q_direct was skipped.
  Real rel_residual;
  Real residual_bound;
  /// sum over t = 1..q_n - 1 of log(1 - h_mt), from one product.
  Real log_Bstar;
  /// Half-range sums of h_mt and of sum_{j>=2} h_mt^j / j (explicit series).
  Real H1;
  Real H2;
  Real s_m0;
  /// min over t >= 1 of s_mt.
  Real min_s;
  /// max over t of |s_mt - s_{m(q-t)}| + |h_mt - h_{m(q-t)}| + |xi_mt + xi_{m(q-t)}|.
  Real symmetry_defect;
};

/// Requires lm + k >= 2l and q_{lm+k} <= max_qn (BudgetExceeded otherwise). Throws
/// IdentityViolation if the direct product is computed and the residual exceeds its bound.
DecompositionTrace decompose(const PeriodicCF& cf, std::size_t m, std::size_t k, Precision prec,
                             const DecomposeOptions& options = {});

/// sin of a small argument by Taylor series and cos as sqrt(1 - sin^2); |x| < 1/4 keeps the series short.
void small_sin_cos(mpfr_ptr s, mpfr_ptr c, mpfr_srcptr x, mpfr_ptr scratch_term, mpfr_ptr scratch_x2);

}  // namespace sudler::eval
