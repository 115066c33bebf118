// The integer c(alpha), its characteristic roots, Lehmer closed forms for the
// convergents, and the constants c_k, e_k governing q_{lm+k}|b|^m.
//
// a and b are kept exactly in Q(sqrt Delta), Delta = c^2 + 4(-1)^{l-1}, which is also the
// field of alpha itself, so identities mixing alpha and b can be checked without rounding.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "sudler/cf.hpp"
#include "sudler/real.hpp"
#include "sudler/surd.hpp"

namespace sudler::spectral {

using cf::PeriodicCF;
using cf::QuadraticNumber;

/// q_{l+1} + p_l of a purely periodic expansion.
mpz_class c_of(const PeriodicCF& cf);

/// c^2 + 4(-1)^{l-1}.
mpz_class discriminant(const PeriodicCF& cf);

struct Roots {
  Real a;
  Real b;
};

/// Roots of x^2 - c x + (-1)^l, a > 1 > |b|.
Roots roots_ab(const PeriodicCF& cf, Precision prec);
QuadraticNumber exact_a(const PeriodicCF& cf);
QuadraticNumber exact_b(const PeriodicCF& cf);
/// alpha as an element of Q(sqrt Delta).
QuadraticNumber exact_alpha(const PeriodicCF& cf);

struct LehmerParams {
  mpz_class R;
  int Q = 1;
};

/// R = c^2, Q = (-1)^{l-1}; validates R - 4Q > 0.
LehmerParams lehmer_params(const PeriodicCF& cf);

/// L_n(R, Q) by the two-branch recursion.
mpz_class lehmer(const LehmerParams& params, std::size_t n);
/// L_0..L_n.
std::vector<mpz_class> lehmer_sequence(const LehmerParams& params, std::size_t n);
/// L_n from the closed form ((a^n - b^n)/(a - b) for odd n, (a^n - b^n)/(a^2 - b^2) for even n), as a real.
Real lehmer_closed_form(const LehmerParams& params, std::size_t n, Precision prec);

/// q_{lm+k} and p_{lm+k} from the Lehmer representation; m >= 2, 0 <= k < l.
mpz_class qn_closed(const PeriodicCF& cf, std::size_t m, std::size_t k);
mpz_class pn_closed(const PeriodicCF& cf, std::size_t m, std::size_t k);

/// (q_{l+k} - b q_k)/(a - b), exactly.
QuadraticNumber exact_ck(const PeriodicCF& cf, std::size_t k);
/// ((-1)^{k-1}/q_l) |a q_k - q_{l+k}|, exactly.
QuadraticNumber exact_ek(const PeriodicCF& cf, std::size_t k);
/// (p_{l+k} - b p_k)/(a - b): the limit of p_{lm+k}|b|^m.
QuadraticNumber exact_dk(const PeriodicCF& cf, std::size_t k);

struct CkEk {
  Real c_k;
  Real e_k;
};

CkEk constants_ck_ek(const PeriodicCF& cf, std::size_t k, Precision prec);

/// q_l(alpha_{tau_k})/(a - b).
Real abs_ckek(const PeriodicCF& cf, std::size_t k, Precision prec);

struct ResidueConstants {
  std::size_t k = 0;
  Real c_k;
  Real e_k;
  Real abs_ckek;
  PeriodicCF alpha_tau_k;
  PeriodicCF alpha_sigma_k;
};

struct SpectralConstants {
  mpz_class c;
  Real a;
  Real b;
  std::vector<ResidueConstants> per_k;
};

SpectralConstants spectral_constants(const PeriodicCF& cf, Precision prec);

/// {c, a, b, per_k: [{k, c_k, e_k, abs_ckek}]}, decimals with `digits` significant digits.
nlohmann::json to_json(const SpectralConstants& sc, int digits = 30);

/// q_n alpha - p_n - e_k b^m in exact arithmetic, n = lm + k. Zero whenever the identity holds.
/// Defined for n >= 2l and for the anchor n = l (m = 1, k = 0).
QuadraticNumber exact_qn_alpha_residual(const PeriodicCF& cf, std::size_t m, std::size_t k);

struct PreperiodConstants {
  Real c_hk;
  Real e_hk;
  Real d_k;
};

/// Exact forms for an expansion with a non-empty preperiod of length h, tail alpha:
///   c_{h,k} = q_{h+1}(beta) c_k + q_h(beta) d_k,
///   e_{h,k} = (-1)^h e_k / (q_{h+1}(beta) + alpha q_h(beta)),
/// so that q_{h+n}(beta) beta - p_{h+n}(beta) = e_{h,k} b^m.
QuadraticNumber exact_c_hk(const PeriodicCF& beta, std::size_t k);
QuadraticNumber exact_e_hk(const PeriodicCF& beta, std::size_t k);
PreperiodConstants preperiod_constants(const PeriodicCF& beta, std::size_t k, Precision prec);

}  // namespace sudler::spectral
