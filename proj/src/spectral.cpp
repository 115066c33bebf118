#include "sudler/spectral.hpp"

#include "sudler/errors.hpp"

namespace sudler::spectral {

namespace {

void require_purely_periodic(const PeriodicCF& cf, const char* op) {
  if (!cf.purely_periodic()) throw DomainError(std::string(op) + ": expansion must be purely periodic");
}

void require_residue(const PeriodicCF& cf, std::size_t k) {
  if (k >= cf.period_length()) throw DomainError("residue k must lie in 0..l-1");
}

int parity_sign(std::size_t n) { return n % 2 == 0 ? 1 : -1; }

QuadraticNumber rat(const mpz_class& d, const mpz_class& v) { return QuadraticNumber::rational(d, mpq_class(v)); }

}  // namespace

mpz_class c_of(const PeriodicCF& cf) {
  require_purely_periodic(cf, "c_of");
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, l + 1);
  return ct.q(l + 1) + ct.p(l);
}

mpz_class discriminant(const PeriodicCF& cf) {
  const mpz_class c = c_of(cf);
  return c * c + 4 * parity_sign(cf.period_length() - 1);
}

QuadraticNumber exact_a(const PeriodicCF& cf) {
  const mpz_class d = discriminant(cf);
  return {d, mpq_class(c_of(cf), 2), mpq_class(1, 2)};
}

QuadraticNumber exact_b(const PeriodicCF& cf) {
  const mpz_class d = discriminant(cf);
  return {d, mpq_class(c_of(cf), 2), mpq_class(-1, 2)};
}

QuadraticNumber exact_alpha(const PeriodicCF& cf) {
  require_purely_periodic(cf, "exact_alpha");
  return cf::surd_from_cf(cf).to_field(discriminant(cf));
}

Roots roots_ab(const PeriodicCF& cf, Precision prec) {
  require_purely_periodic(cf, "roots_ab");
  return {exact_a(cf).to_real(prec), exact_b(cf).to_real(prec)};
}

LehmerParams lehmer_params(const PeriodicCF& cf) {
  const mpz_class c = c_of(cf);
  LehmerParams params{c * c, parity_sign(cf.period_length())};
  if (params.R <= 0 || params.R - 4 * params.Q <= 0) throw DomainError("Lehmer parameters need R > 0 and R - 4Q > 0");
  return params;
}

std::vector<mpz_class> lehmer_sequence(const LehmerParams& params, std::size_t n) {
  if (params.R <= 0 || params.R - 4 * params.Q <= 0) throw DomainError("Lehmer parameters need R > 0 and R - 4Q > 0");
  std::vector<mpz_class> L(n + 1 < 2 ? 2 : n + 1);
  L[0] = 0;
  L[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (i % 2 == 0) {
      L[i] = L[i - 1] - params.Q * L[i - 2];
    } else {
      L[i] = params.R * L[i - 1] - params.Q * L[i - 2];
    }
  }
  L.resize(n + 1);
  return L;
}

mpz_class lehmer(const LehmerParams& params, std::size_t n) { return lehmer_sequence(params, n).back(); }

Real lehmer_closed_form(const LehmerParams& params, std::size_t n, Precision prec) {
  // u, v solve x^2 - sqrt(R) x + Q = 0.
  const Precision work = prec + 64;
  const Real sr = sqrt(Real(params.R, work));
  Real disc = Real(params.R, work) - Real(mpz_class(4 * params.Q), work);
  disc = sqrt(disc);
  const Real u = (sr + disc) / 2L;
  const Real v = (sr - disc) / 2L;
  const long nn = static_cast<long>(n);
  Real num = pow(u, nn) - pow(v, nn);
  Real den = n % 2 == 1 ? u - v : u * u - v * v;
  return (num / den).with_precision(prec);
}

namespace {

mpz_class closed_form(const PeriodicCF& cf, std::size_t m, std::size_t k, bool numerators) {
  require_purely_periodic(cf, "closed form");
  require_residue(cf, k);
  if (m < 2) throw DomainError("closed form needs l m + k >= 2l");
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, l + k + 1);
  const mpz_class c = ct.q(l + 1) + ct.p(l);
  const auto L = lehmer_sequence(lehmer_params(cf), m);
  const mpz_class g1 = m % 2 == 0 ? c : mpz_class(1);
  const mpz_class g2 = m % 2 == 0 ? mpz_class(1) : c;
  const mpz_class& upper = numerators ? ct.p(l + k) : ct.q(l + k);
  const mpz_class& lower = numerators ? ct.p(k) : ct.q(k);
  return g1 * L[m] * upper + parity_sign(l - 1) * g2 * L[m - 1] * lower;
}

}  // namespace

mpz_class qn_closed(const PeriodicCF& cf, std::size_t m, std::size_t k) { return closed_form(cf, m, k, false); }
mpz_class pn_closed(const PeriodicCF& cf, std::size_t m, std::size_t k) { return closed_form(cf, m, k, true); }

QuadraticNumber exact_ck(const PeriodicCF& cf, std::size_t k) {
  require_residue(cf, k);
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, l + k + 1);
  const QuadraticNumber b = exact_b(cf);
  const mpz_class& d = b.radicand();
  return (rat(d, ct.q(l + k)) - b * mpq_class(ct.q(k))) / (exact_a(cf) - b);
}

QuadraticNumber exact_dk(const PeriodicCF& cf, std::size_t k) {
  require_residue(cf, k);
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, l + k + 1);
  const QuadraticNumber b = exact_b(cf);
  const mpz_class& d = b.radicand();
  return (rat(d, ct.p(l + k)) - b * mpq_class(ct.p(k))) / (exact_a(cf) - b);
}

QuadraticNumber exact_ek(const PeriodicCF& cf, std::size_t k) {
  require_residue(cf, k);
  const std::size_t l = cf.period_length();
  const auto ct = cf::convergents(cf, l + k + 1);
  const QuadraticNumber a = exact_a(cf);
  const QuadraticNumber inner = (a * mpq_class(ct.q(k)) - rat(a.radicand(), ct.q(l + k))).abs();
  // (-1)^{k-1}
  return inner * mpq_class(-parity_sign(k), ct.q(l));
}

CkEk constants_ck_ek(const PeriodicCF& cf, std::size_t k, Precision prec) {
  require_purely_periodic(cf, "constants_ck_ek");
  return {exact_ck(cf, k).to_real(prec), exact_ek(cf, k).to_real(prec)};
}

Real abs_ckek(const PeriodicCF& cf, std::size_t k, Precision prec) {
  require_purely_periodic(cf, "abs_ckek");
  require_residue(cf, k);
  const std::size_t l = cf.period_length();
  const mpz_class qt = cf::denominator(cf::tau(cf, k), l);
  const Precision work = prec + 16;
  return (Real(qt, work) / sqrt(Real(discriminant(cf), work))).with_precision(prec);
}

SpectralConstants spectral_constants(const PeriodicCF& cf, Precision prec) {
  require_purely_periodic(cf, "spectral_constants");
  Roots r = roots_ab(cf, prec);
  SpectralConstants sc{c_of(cf), std::move(r.a), std::move(r.b), {}};
  for (std::size_t k = 0; k < cf.period_length(); ++k) {
    CkEk ce = constants_ck_ek(cf, k, prec);
    sc.per_k.push_back(ResidueConstants{k, std::move(ce.c_k), std::move(ce.e_k), abs_ckek(cf, k, prec),
                                        cf::tau(cf, k), cf::sigma(cf, k)});
  }
  return sc;
}

nlohmann::json to_json(const SpectralConstants& sc, int digits) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& row : sc.per_k) {
    per.push_back({{"k", row.k},
                   {"c_k", row.c_k.to_string(digits)},
                   {"e_k", row.e_k.to_string(digits)},
                   {"abs_ckek", row.abs_ckek.to_string(digits)}});
  }
  nlohmann::json c = mpz_fits_slong_p(sc.c.get_mpz_t()) != 0 ? nlohmann::json(sc.c.get_si()) : nlohmann::json(sc.c.get_str());
  return {{"c", c}, {"a", sc.a.to_string(digits)}, {"b", sc.b.to_string(digits)}, {"per_k", per}};
}

QuadraticNumber exact_qn_alpha_residual(const PeriodicCF& cf, std::size_t m, std::size_t k) {
  require_purely_periodic(cf, "exact_qn_alpha_residual");
  require_residue(cf, k);
  const bool anchor = m == 1 && k == 0;
  if (m < 2 && !anchor) throw DomainError("q_n alpha = p_n + e_k b^m needs l m + k >= 2l or m = 1, k = 0");
  const std::size_t n = cf.period_length() * m + k;
  const auto ct = cf::convergents(cf, n);
  const QuadraticNumber alpha = exact_alpha(cf);
  const QuadraticNumber lhs = alpha * mpq_class(ct.q(n)) - mpq_class(ct.p(n));
  return lhs - exact_ek(cf, k) * exact_b(cf).pow(static_cast<unsigned>(m));
}

namespace {

void require_preperiod(const PeriodicCF& beta) {
  if (beta.preperiod().empty()) throw DomainError("preperiod constants need a non-empty preperiod");
}

}  // namespace

QuadraticNumber exact_c_hk(const PeriodicCF& beta, std::size_t k) {
  require_preperiod(beta);
  const PeriodicCF alpha = beta.tail();
  const std::size_t h = beta.preperiod_length();
  const auto ct = cf::convergents(beta, h + 1);
  return exact_ck(alpha, k) * mpq_class(ct.q(h + 1)) + exact_dk(alpha, k) * mpq_class(ct.q(h));
}

QuadraticNumber exact_e_hk(const PeriodicCF& beta, std::size_t k) {
  require_preperiod(beta);
  const PeriodicCF alpha = beta.tail();
  const std::size_t h = beta.preperiod_length();
  const auto ct = cf::convergents(beta, h + 1);
  const QuadraticNumber den = exact_alpha(alpha) * mpq_class(ct.q(h)) + mpq_class(ct.q(h + 1));
  return exact_ek(alpha, k) * mpq_class(parity_sign(h)) / den;
}

PreperiodConstants preperiod_constants(const PeriodicCF& beta, std::size_t k, Precision prec) {
  return {exact_c_hk(beta, k).to_real(prec), exact_e_hk(beta, k).to_real(prec), exact_dk(beta.tail(), k).to_real(prec)};
}

}  // namespace sudler::spectral
