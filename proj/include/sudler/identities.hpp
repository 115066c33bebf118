// Exact integer and quadratic-field checks of the convergent identities.
//
// Each check enumerates its index range, counts cases and failures, and keeps the
// first counterexample as text. Nothing here rounds.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sudler/cf.hpp"

namespace sudler::identities {

using cf::PeriodicCF;

struct IdentityCheck {
  IdentityCheck() = default;
  explicit IdentityCheck(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
  void record(bool holds, const std::string& where);
};

/// p_n q_{n+1} - p_{n+1} q_n = (-1)^n for n <= n_max.
IdentityCheck check_determinant_sign(const PeriodicCF& cf, std::size_t n_max);
/// p_{n+m} q_m - p_m q_{n+m} = (-1)^{m-1} q_n(alpha_{tau_{m mod l}}), n, m <= n_max.
IdentityCheck check_shift_determinant(const PeriodicCF& cf, std::size_t n_max);
/// q_{l+r} = q_{l+1} q_r + q_l p_r and p_{l+r} = p_{l+1} q_r + p_l p_r, r <= r_max.
IdentityCheck check_period_shift(const PeriodicCF& cf, std::size_t r_max);
/// q_{l-1}(alpha_{tau_k}) = p_l(alpha_{tau_{k-1}}), k = 1..l-1. Vacuous (zero cases) when l = 1.
IdentityCheck check_rotation_link(const PeriodicCF& cf);
/// q_n = c q_{n-l} + (-1)^{l-1} q_{n-2l}, same for p, 2l <= n <= n_max.
IdentityCheck check_two_step_recursion(const PeriodicCF& cf, std::size_t n_max);
/// c invariant under every tau_u and sigma_u, and a, b with it.
IdentityCheck check_c_invariance(const PeriodicCF& cf);
/// q_{n+1} = det A_n and p_n = det B_n (tridiagonal matrices over the period), n <= n_max.
IdentityCheck check_determinant_oracle(const PeriodicCF& cf, std::size_t n_max);
/// Lehmer forms of q_{lm+k} and p_{lm+k} equal the recursion, 2l <= lm+k <= n_max.
IdentityCheck check_closed_forms(const PeriodicCF& cf, std::size_t n_max);
/// q_n alpha - p_n = e_k b^m with zero residual, plus the sign (-1)^{n-1} of the right side.
IdentityCheck check_qn_alpha(const PeriodicCF& cf, std::size_t n_max);
/// q_{n-1}(alpha)/q_n(alpha) = p_n(alpha_{sigma_k})/q_n(alpha_{sigma_k}) as integer pairs.
IdentityCheck check_quotient_identity(const PeriodicCF& cf, std::size_t n_max);
/// q_{h+u}(beta) = q_{h+1}(beta) q_u(alpha) + q_h(beta) p_u(alpha), u <= u_max, for beta with a preperiod.
IdentityCheck check_preperiod_split(const PeriodicCF& beta, std::size_t u_max);
/// q_{h+n}(beta) beta - p_{h+n}(beta) = e_{h,k} b^m and |c_{h,k} e_{h,k}| = |c_k e_k|, exactly.
IdentityCheck check_preperiod_constants(const PeriodicCF& beta, std::size_t n_max);

/// Every check that applies to a purely periodic expansion.
std::vector<IdentityCheck> battery(const PeriodicCF& cf, std::size_t n_max);
/// Checks for an expansion with a preperiod.
std::vector<IdentityCheck> preperiod_battery(const PeriodicCF& beta, std::size_t n_max);

/// Fraction-free Gaussian elimination on a square integer matrix.
mpz_class bareiss_determinant(std::vector<std::vector<mpz_class>> m);

}  // namespace sudler::identities
