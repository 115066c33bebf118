#include "sudler/identities.hpp"

#include <utility>

#include "sudler/errors.hpp"
#include "sudler/spectral.hpp"
#include "sudler/surd.hpp"

namespace sudler::identities {

void IdentityCheck::record(bool holds, const std::string& where) {
  ++cases;
  if (holds) return;
  if (failures++ == 0) first_failure = where;
}

namespace {

int parity_sign(std::size_t n) { return n % 2 == 0 ? 1 : -1; }

std::string at(std::initializer_list<std::pair<const char*, std::size_t>> idx) {
  std::string out;
  for (const auto& [name, v] : idx) {
    if (!out.empty()) out += ", ";
    out += name;
    out += "=";
    out += std::to_string(v);
  }
  return out;
}

}  // namespace

IdentityCheck check_determinant_sign(const PeriodicCF& cf, std::size_t n_max) {
  IdentityCheck chk{"convergent determinant p_n q_{n+1} - p_{n+1} q_n = (-1)^n"};
  const auto ct = cf::convergents(cf, n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const mpz_class lhs = ct.p(n) * ct.q(n + 1) - ct.p(n + 1) * ct.q(n);
    chk.record(lhs == parity_sign(n), at({{"n", n}}));
  }
  return chk;
}

IdentityCheck check_shift_determinant(const PeriodicCF& cf, std::size_t n_max) {
  IdentityCheck chk{"shifted determinant equals rotated denominator"};
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, 2 * n_max + 1);
  std::vector<cf::ConvergentTable> rotated;
  for (std::size_t u = 0; u < l; ++u) rotated.push_back(cf::convergents(cf::tau(cf, u), n_max + 1));
  for (std::size_t m = 0; m <= n_max; ++m) {
    for (std::size_t n = 0; n <= n_max; ++n) {
      const mpz_class lhs = ct.p(n + m) * ct.q(m) - ct.p(m) * ct.q(n + m);
      const mpz_class rhs = -parity_sign(m) * rotated[m % l].q(n);
      chk.record(lhs == rhs, at({{"n", n}, {"m", m}}));
    }
  }
  return chk;
}

IdentityCheck check_period_shift(const PeriodicCF& cf, std::size_t r_max) {
  IdentityCheck chk{"period shift q_{l+r}, p_{l+r}"};
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, l + r_max + 1);
  for (std::size_t r = 0; r <= r_max; ++r) {
    chk.record(ct.q(l + r) == ct.q(l + 1) * ct.q(r) + ct.q(l) * ct.p(r), at({{"r", r}, {"q", 1}}));
    chk.record(ct.p(l + r) == ct.p(l + 1) * ct.q(r) + ct.p(l) * ct.p(r), at({{"r", r}, {"p", 1}}));
  }
  return chk;
}

IdentityCheck check_rotation_link(const PeriodicCF& cf) {
  IdentityCheck chk{"rotation link q_{l-1}(tau_k) = p_l(tau_{k-1})"};
  const std::size_t l = cf.period_length();
  for (std::size_t k = 1; k < l; ++k) {
    const auto cur = cf::convergents(cf::tau(cf, k), l);
    const auto prev = cf::convergents(cf::tau(cf, k - 1), l);
    chk.record(cur.q(l - 1) == prev.p(l), at({{"k", k}}));
  }
  return chk;
}

IdentityCheck check_two_step_recursion(const PeriodicCF& cf, std::size_t n_max) {
  IdentityCheck chk{"two-step recursion q_n = c q_{n-l} + (-1)^{l-1} q_{n-2l}"};
  const std::size_t l = cf.period_length();
  const mpz_class c = spectral::c_of(cf);
  const int s = parity_sign(l - 1);
  const auto ct = cf::convergents(cf, n_max < 2 * l ? 2 * l : n_max);
  for (std::size_t n = 2 * l; n <= n_max; ++n) {
    chk.record(ct.q(n) == c * ct.q(n - l) + s * ct.q(n - 2 * l), at({{"n", n}, {"q", 1}}));
    chk.record(ct.p(n) == c * ct.p(n - l) + s * ct.p(n - 2 * l), at({{"n", n}, {"p", 1}}));
  }
  return chk;
}

IdentityCheck check_c_invariance(const PeriodicCF& cf) {
  IdentityCheck chk{"c, a, b invariant under tau_u and sigma_u"};
  const mpz_class c = spectral::c_of(cf);
  const auto a = spectral::exact_a(cf);
  const auto b = spectral::exact_b(cf);
  for (std::size_t u = 0; u < cf.period_length(); ++u) {
    const PeriodicCF t = cf::tau(cf, u);
    const PeriodicCF s = cf::sigma(cf, u);
    chk.record(spectral::c_of(t) == c, at({{"tau", u}}));
    chk.record(spectral::c_of(s) == c, at({{"sigma", u}}));
    chk.record(spectral::exact_a(t) == a && spectral::exact_b(t) == b, at({{"tau ab", u}}));
    chk.record(spectral::exact_a(s) == a && spectral::exact_b(s) == b, at({{"sigma ab", u}}));
    if (u >= 1) chk.record(s == cf::sigma(t, 0), at({{"sigma = sigma_0 tau", u}}));
  }
  return chk;
}

mpz_class bareiss_determinant(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

namespace {

using Matrix = std::vector<std::vector<mpz_class>>;

// Tridiagonal with `diag` on the diagonal, -1 above and 1 below.
Matrix tridiagonal(const std::vector<mpz_class>& diag) {
  const std::size_t n = diag.size();
  Matrix m(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = diag[i];
    if (i + 1 < n) {
      m[i][i + 1] = -1;
      m[i + 1][i] = 1;
    }
  }
  return m;
}

}  // namespace

IdentityCheck check_determinant_oracle(const PeriodicCF& cf, std::size_t n_max) {
  IdentityCheck chk{"tridiagonal determinants q_{n+1} = det A_n, p_n = det B_n"};
  const auto& d = cf.period();
  const std::size_t l = d.size();
  auto entry = [&](std::size_t j) { return mpz_class(static_cast<unsigned long>(d[(j - 1) % l])); };
  const auto ct = cf::convergents(cf, n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    std::vector<mpz_class> diag_a;
    for (std::size_t j = 1; j <= n; ++j) diag_a.push_back(entry(j));
    const mpz_class det_a = n == 0 ? mpz_class(1) : bareiss_determinant(tridiagonal(diag_a));
    chk.record(det_a == ct.q(n + 1), at({{"A_n", n}}));

    mpz_class det_b;
    if (n == 0) {
      det_b = 1;
    } else {
      std::vector<mpz_class> diag_b{0};
      for (std::size_t j = 1; j < n; ++j) diag_b.push_back(entry(j));
      det_b = bareiss_determinant(tridiagonal(diag_b));
    }
    chk.record(det_b == ct.p(n), at({{"B_n", n}}));
  }
  return chk;
}

IdentityCheck check_closed_forms(const PeriodicCF& cf, std::size_t n_max) {
  IdentityCheck chk{"Lehmer closed forms for q_{lm+k}, p_{lm+k}"};
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, n_max);
  for (std::size_t n = 2 * l; n <= n_max; ++n) {
    const std::size_t m = n / l;
    const std::size_t k = n % l;
    chk.record(spectral::qn_closed(cf, m, k) == ct.q(n), at({{"n", n}, {"q", 1}}));
    chk.record(spectral::pn_closed(cf, m, k) == ct.p(n), at({{"n", n}, {"p", 1}}));
  }
  return chk;
}

IdentityCheck check_qn_alpha(const PeriodicCF& cf, std::size_t n_max) {
  IdentityCheck chk{"q_n alpha - p_n = e_k b^m (exact)"};
  const std::size_t l = cf.period_length();
  const auto alpha = spectral::exact_alpha(cf);
  const auto b = spectral::exact_b(cf);
  const auto ct = cf::convergents(cf, n_max);
  std::vector<cf::QuadraticNumber> e;
  for (std::size_t k = 0; k < l; ++k) e.push_back(spectral::exact_ek(cf, k));
  auto one = [&](std::size_t n) {
    const std::size_t m = n / l;
    const std::size_t k = n % l;
    const auto lhs = alpha * mpq_class(ct.q(n)) - mpq_class(ct.p(n));
    const auto rhs = e[k] * b.pow(static_cast<unsigned>(m));
    chk.record((lhs - rhs).is_zero(), at({{"n", n}}));
    // With this indexing p_n/q_n overshoots alpha exactly when n is even.
    chk.record(rhs.sign() == -parity_sign(n), at({{"sign n", n}}));
  };
  one(l);
  for (std::size_t n = 2 * l; n <= n_max; ++n) one(n);
  return chk;
}

IdentityCheck check_quotient_identity(const PeriodicCF& cf, std::size_t n_max) {
  IdentityCheck chk{"q_{n-1}/q_n equals the sigma_k convergent"};
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, n_max);
  std::vector<cf::ConvergentTable> sig;
  for (std::size_t k = 0; k < l; ++k) sig.push_back(cf::convergents(cf::sigma(cf, k), n_max));
  for (std::size_t n = 2 * l; n <= n_max; ++n) {
    const auto& s = sig[n % l];
    chk.record(ct.q(n - 1) == s.p(n) && ct.q(n) == s.q(n), at({{"n", n}}));
  }
  return chk;
}

IdentityCheck check_preperiod_split(const PeriodicCF& beta, std::size_t u_max) {
  if (beta.preperiod().empty()) throw DomainError("preperiod split needs a preperiod");
  IdentityCheck chk{"preperiod split q_{h+u}(beta)"};
  const std::size_t h = beta.preperiod_length();
  const auto bt = cf::convergents(beta, h + u_max);
  const auto at_ = cf::convergents(beta.tail(), u_max < 1 ? 1 : u_max);
  for (std::size_t u = 0; u <= u_max; ++u) {
    chk.record(bt.q(h + u) == bt.q(h + 1) * at_.q(u) + bt.q(h) * at_.p(u), at({{"u", u}}));
  }
  return chk;
}

IdentityCheck check_preperiod_constants(const PeriodicCF& beta, std::size_t n_max) {
  IdentityCheck chk{"preperiod constants c_{h,k}, e_{h,k} (exact)"};
  const PeriodicCF alpha = beta.tail();
  const std::size_t l = alpha.period_length();
  const std::size_t h = beta.preperiod_length();
  const auto value = cf::value_of(beta);
  const auto b = spectral::exact_b(alpha);
  const auto bt = cf::convergents(beta, h + n_max);
  for (std::size_t k = 0; k < l; ++k) {
    const auto chk_ = spectral::exact_c_hk(beta, k);
    const auto ehk = spectral::exact_e_hk(beta, k);
    const auto prod = (chk_ * ehk).abs();
    const auto plain = (spectral::exact_ck(alpha, k) * spectral::exact_ek(alpha, k)).abs();
    chk.record(prod == plain, at({{"|c_hk e_hk|, k", k}}));
  }
  for (std::size_t n = 2 * l; n <= n_max; ++n) {
    const std::size_t m = n / l;
    const std::size_t k = n % l;
    const auto lhs = value * mpq_class(bt.q(h + n)) - mpq_class(bt.p(h + n));
    const auto rhs = spectral::exact_e_hk(beta, k) * b.pow(static_cast<unsigned>(m));
    chk.record((lhs - rhs).is_zero(), at({{"n", n}}));
  }
  return chk;
}

std::vector<IdentityCheck> battery(const PeriodicCF& cf, std::size_t n_max) {
  const std::size_t small = n_max < 20 ? n_max : 20;
  std::vector<IdentityCheck> out;
  out.push_back(check_determinant_sign(cf, n_max));
  out.push_back(check_shift_determinant(cf, small));
  out.push_back(check_period_shift(cf, small));
  if (cf.period_length() > 1) out.push_back(check_rotation_link(cf));
  out.push_back(check_two_step_recursion(cf, n_max));
  out.push_back(check_c_invariance(cf));
  out.push_back(check_determinant_oracle(cf, 8));
  out.push_back(check_closed_forms(cf, n_max));
  out.push_back(check_qn_alpha(cf, n_max));
  out.push_back(check_quotient_identity(cf, n_max));
  return out;
}

std::vector<IdentityCheck> preperiod_battery(const PeriodicCF& beta, std::size_t n_max) {
  return {check_preperiod_split(beta, 30), check_preperiod_constants(beta, n_max)};
}

}  // namespace sudler::identities
