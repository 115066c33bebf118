// Limits of A_m, B_m, C_m and the constants C_k = lim Q_{lm+k}.
#pragma once

#include <cstdint>
#include <json.hpp>

#include "sudler/cf.hpp"
#include "sudler/real.hpp"

namespace sudler::limits {

using cf::PeriodicCF;

/// 2 pi |c_k e_k|.
Real limit_A(const PeriodicCF& cf, std::size_t k, Precision prec);

struct CProduct {
  /// prod_{t<=T} (1 - 1/u_t^2), an upper bound for the infinite product.
  Real value;
  /// A >= sum_{t>T} 1/u_t^2; the infinite product lies in [value (1 - A), value].
  Real tail_bound;
  Real lower;
  Real sum_inv_u2;
  Real min_u;
};

/// u_t = 2 (t / |c_k e_k| - xi_inf_t) for t = 1..T.
CProduct limit_C(const PeriodicCF& cf, std::size_t k, std::uint64_t T, Precision prec);

struct Gamma1 {
  Real value;
  /// |c e| K (log T + 1) / T with K = max_{t<=T} |S_t| / log(T + 1). Heuristic.
  Real tail_estimate;
  Real max_abs_prefix;
  /// |S_t| < (3/2) (sum of Ostrowski digits of t in base alpha_sigma_k) at every t <= T.
  bool prefix_bound_ok = true;
  std::uint64_t first_prefix_violation = 0;
};

/// sum_{t<=T} |c_k e_k| S_t / (t (t + 1)), S_t = sum_{s<=t} xi_inf_s.
Gamma1 gamma1(const PeriodicCF& cf, std::size_t k, std::uint64_t T, Precision prec);

struct Gamma2 {
  Real value;
  /// 1 / (2T).
  Real tail_bound;
};

/// sum_{t<=T} (-log(1 - h_inf_t) - h_inf_t).
Gamma2 gamma2(const PeriodicCF& cf, std::size_t k, std::uint64_t T, Precision prec);

/// exp(-2 (gamma1 + gamma2)).
Real limit_B(const Real& gamma1, const Real& gamma2);

struct LimitReport {
  std::size_t k = 0;
  Real A_lim;
  Real C_lim;
  Real C_lower;
  Real gamma1;
  Real gamma2;
  Real B_lim;
  Real C_k;
  std::uint64_t T = 0;
  /// Combines the C product bracket, the gamma2 bound and the heuristic gamma1 estimate.
  Real tail_bound;
  Real sum_inv_u2;
  bool prefix_bound_ok = true;
};

struct LimitOptions {
  std::uint64_t T = 1'000'000;
  Precision prec{192};
};

/// One pass over t = 1..T shared by all three series.
LimitReport limit_Ck(const PeriodicCF& cf, std::size_t k, const LimitOptions& options = {});

nlohmann::json to_json(const LimitReport& r, int digits = 30);

/// |sum_{i=1}^{v q} ({theta + i alpha} - 1/2)| < 3v/2. Throws DomainError unless q is a convergent
/// denominator of the expansion.
bool sumfrac_check(const PeriodicCF& cf, const Real& theta, std::uint64_t v, std::uint64_t q);

}  // namespace sudler::limits
