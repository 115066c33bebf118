#include "sudler/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sudler/errors.hpp"
#include "sudler/identities.hpp"
#include "sudler/limits.hpp"
#include "sudler/spectral.hpp"
#include "sudler/sudler.hpp"
#include "sudler/surd.hpp"

namespace sudler::explorer {

namespace {

const char* const kBudget = "budget_exceeded";

std::string uint_str(std::uint64_t v) { return std::to_string(v); }

eval::FracMode mode_of(const Settings& s) { return s.incremental ? eval::FracMode::Incremental : eval::FracMode::Direct; }

std::uint64_t checked_q(const PeriodicCF& cf, std::size_t n, std::uint64_t max_qn) {
  const mpz_class q = cf::denominator(cf, n);
  if (q > max_qn) {
    throw BudgetExceeded("q_" + std::to_string(n) + " = " + q.get_str() + " exceeds the budget " + uint_str(max_qn));
  }
  return q.get_ui();
}

Json battery_json(const std::vector<identities::IdentityCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) {
    Json row = {{"name", c.name}, {"cases", c.cases}, {"failures", c.failures}};
    if (!c.first_failure.empty()) row["first_failure"] = c.first_failure;
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

std::string format_real(const Real& x, const Format& fmt) { return fmt.exact_repr ? x.to_hex() : x.to_string(fmt.digits); }

std::string Table::to_csv() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out.str();
}

Table Table::from_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (header) {
      t.columns = std::move(cells);
      header = false;
    } else {
      if (cells.size() != t.columns.size()) throw ParseError("CSV row has " + std::to_string(cells.size()) + " cells", offset);
      t.rows.push_back(std::move(cells));
    }
    offset += line.size() + 1;
  }
  if (header) throw ParseError("CSV without a header", 0);
  return t;
}

Json Table::to_json() const { return Json{{"columns", columns}, {"rows", rows}}; }

Table Table::from_json(const Json& j) {
  Table t;
  t.columns = j.at("columns").get<std::vector<std::string>>();
  t.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  for (const auto& r : t.rows) {
    if (r.size() != t.columns.size()) throw DomainError("JSON table row width differs from the header");
  }
  return t;
}

Json cmd_constants(const PeriodicCF& input, const Settings& s) {
  const PeriodicCF cf = input.tail();
  const auto sc = spectral::spectral_constants(cf, s.prec);
  Json out;
  out["cf"] = cf::format_cf(input);
  out["c"] = sc.c.get_str();
  out["a"] = format_real(sc.a, s.format);
  out["b"] = format_real(sc.b, s.format);
  Json per = Json::array();
  for (const auto& r : sc.per_k) {
    per.push_back({{"k", r.k},
                   {"c_k", format_real(r.c_k, s.format)},
                   {"e_k", format_real(r.e_k, s.format)},
                   {"abs_ckek", format_real(r.abs_ckek, s.format)},
                   {"alpha_tau_k", cf::format_cf(r.alpha_tau_k)},
                   {"alpha_sigma_k", cf::format_cf(r.alpha_sigma_k)}});
  }
  out["per_k"] = std::move(per);
  constexpr std::size_t kIdentityRange = 60;
  if (input.purely_periodic()) {
    out["identities"] = battery_json(identities::battery(cf, kIdentityRange));
  } else {
    Json pre;
    pre["h"] = input.preperiod_length();
    pre["alpha"] = cf::format_cf(cf);
    Json rows = Json::array();
    for (std::size_t k = 0; k < cf.period_length(); ++k) {
      const auto pc = spectral::preperiod_constants(input, k, s.prec);
      rows.push_back({{"k", k},
                      {"c_hk", format_real(pc.c_hk, s.format)},
                      {"e_hk", format_real(pc.e_hk, s.format)},
                      {"d_k", format_real(pc.d_k, s.format)},
                      {"abs_chk_ehk", format_real(abs(pc.c_hk * pc.e_hk), s.format)}});
    }
    pre["per_k"] = std::move(rows);
    out["preperiod"] = std::move(pre);
    auto checks = identities::battery(cf, kIdentityRange);
    for (auto& c : identities::preperiod_battery(input, kIdentityRange)) checks.push_back(std::move(c));
    out["identities"] = battery_json(checks);
  }
  return out;
}

bool identities_passed(const Json& constants) {
  for (const auto& c : constants.at("identities")) {
    if (c.at("failures").get<std::size_t>() != 0) return false;
  }
  return true;
}

Table cmd_trace(const PeriodicCF& cf, std::size_t m_max, const Settings& s) {
  if (!cf.purely_periodic()) throw DomainError("trace needs a purely periodic expansion");
  const std::size_t l = cf.period_length();
  std::vector<Real> limit;
  for (std::size_t k = 0; k < l; ++k) limit.push_back(limits::limit_Ck(cf, k, {s.T, s.prec}).C_k);

  Table t;
  t.columns = {"m", "k", "q_n", "A_m", "B_m", "C_m", "Q_direct", "rel_residual", "limit_gap"};
  eval::DecomposeOptions opt;
  opt.max_qn = s.max_qn;
  for (std::size_t m = 2; m <= m_max; ++m) {
    for (std::size_t k = 0; k < l; ++k) {
      const std::string q = cf::denominator(cf, l * m + k).get_str();
      try {
        const auto tr = eval::decompose(cf, m, k, s.prec, opt);
        t.rows.push_back({std::to_string(m), std::to_string(k), q, format_real(tr.A_m, s.format),
                          format_real(tr.B_m, s.format), format_real(tr.C_m, s.format), format_real(tr.Q_direct, s.format),
                          tr.rel_residual.to_string(6), abs(tr.Q_direct - limit[k]).to_string(6)});
      } catch (const BudgetExceeded&) {
        t.rows.push_back({std::to_string(m), std::to_string(k), q, kBudget, kBudget, kBudget, kBudget, kBudget, kBudget});
      }
    }
  }
  return t;
}

bool trace_hit_budget(const Table& trace) {
  return std::any_of(trace.rows.begin(), trace.rows.end(), [](const auto& r) { return r.back() == kBudget; });
}

ScanResult cmd_scan_min(const PeriodicCF& cf, std::size_t n_max, const Settings& s) {
  if (n_max < 2) throw DomainError("scan needs n_max >= 2");
  const std::uint64_t top = checked_q(cf, n_max, s.max_qn);
  const auto ct = cf::convergents(cf, n_max);
  const auto alpha = cf::surd_from_cf(cf);
  const Precision work = s.prec + (cf::ceil_log2(top) + 16);

  ScanResult r{cf, {2, n_max}, {}, Real(work), 0, {}, Real(0L, s.prec)};
  Real P(1L, work);
  Real f(work);
  const Real pi_w = pi(work);
  cf::IncrementalFrac frac(alpha, top, work);
  std::vector<Real> block;
  std::size_t n = 2;
  std::uint64_t lo = ct.q(1).get_ui();
  for (std::uint64_t j = 1; j <= top; ++j) {
    frac.next(f.get());
    if (mpfr_cmp_d(f.get(), 0.5) > 0) mpfr_ui_sub(f.get(), 1, f.get(), MPFR_RNDN);
    mpfr_mul(f.get(), f.get(), pi_w.get(), MPFR_RNDN);
    mpfr_sin(f.get(), f.get(), MPFR_RNDN);
    mpfr_mul_2ui(f.get(), f.get(), 1, MPFR_RNDN);
    P *= f;
    if (j == 1 || P < r.min_P) {
      r.min_P = P;
      r.argmin = j;
    }
    if (j == 1) r.q_values.emplace_back(1, P.with_precision(s.prec));
    while (n <= n_max && ct.q(n) <= lo) ++n;  // repeated denominators open no block
    if (n > n_max) continue;
    const std::uint64_t qn = ct.q(n).get_ui();
    if (j < qn) {
      if (j > lo) block.push_back(P);
      continue;
    }
    r.q_values.emplace_back(qn, P.with_precision(s.prec));
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (block[i] < P) r.violations.push_back({lo + 1 + i, n, block[i].with_precision(s.prec), P.with_precision(s.prec)});
    }
    block.clear();
    lo = qn;
    ++n;
  }
  r.min_P = r.min_P.with_precision(s.prec);

  // Re-evaluate a few P_j directly; the running product must agree.
  std::mt19937_64 rng(top);
  std::uniform_int_distribution<std::uint64_t> pick(1, top);
  std::vector<std::uint64_t> sample{top};
  for (int i = 0; i < 9; ++i) sample.push_back(pick(rng));
  std::sort(sample.begin(), sample.end());
  Real running(1L, work);
  cf::IncrementalFrac again(alpha, top, work);
  std::uint64_t j = 0;
  for (std::uint64_t target : sample) {
    for (; j < target; ) {
      again.next(f.get());
      ++j;
      if (mpfr_cmp_d(f.get(), 0.5) > 0) mpfr_ui_sub(f.get(), 1, f.get(), MPFR_RNDN);
      mpfr_mul(f.get(), f.get(), pi_w.get(), MPFR_RNDN);
      mpfr_sin(f.get(), f.get(), MPFR_RNDN);
      mpfr_mul_2ui(f.get(), f.get(), 1, MPFR_RNDN);
      running *= f;
    }
    const Real direct = eval::sudler_P(alpha, target, s.prec, eval::FracMode::Direct).with_precision(work);
    const Real err = abs(running / direct - Real(1L, work)).with_precision(s.prec);
    r.spot_check_error = max(r.spot_check_error, err);
  }
  return r;
}

Json to_json(const ScanResult& r, const Format& fmt) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"j", x.j}, {"n", x.n}, {"P_j", format_real(x.P_j, fmt)}, {"P_qn", format_real(x.P_qn, fmt)}});
  }
  Json q = Json::array();
  for (const auto& [qn, P] : r.q_values) q.push_back({{"q_n", qn}, {"P", format_real(P, fmt)}});
  return {{"cf", cf::format_cf(r.cf)},
          {"n_range", {r.n_range.first, r.n_range.second}},
          {"violations", std::move(v)},
          {"min_P", format_real(r.min_P, fmt)},
          {"argmin", r.argmin},
          {"q_values", std::move(q)},
          {"spot_check_error", r.spot_check_error.to_string(6)}};
}

ScanResult scan_from_json(const Json& j, Precision prec) {
  ScanResult r{cf::parse_cf(j.at("cf").get<std::string>()),
               {j.at("n_range").at(0).get<std::size_t>(), j.at("n_range").at(1).get<std::size_t>()},
               {},
               Real::parse(j.at("min_P").get<std::string>(), prec),
               j.at("argmin").get<std::uint64_t>(),
               {},
               Real::parse(j.at("spot_check_error").get<std::string>(), prec)};
  for (const auto& v : j.at("violations")) {
    r.violations.push_back({v.at("j").get<std::uint64_t>(), v.at("n").get<std::size_t>(),
                            Real::parse(v.at("P_j").get<std::string>(), prec),
                            Real::parse(v.at("P_qn").get<std::string>(), prec)});
  }
  for (const auto& q : j.at("q_values")) {
    r.q_values.emplace_back(q.at("q_n").get<std::uint64_t>(), Real::parse(q.at("P").get<std::string>(), prec));
  }
  return r;
}

Json cmd_liminf(const PeriodicCF& cf, std::size_t n_max, const Settings& s) {
  const ScanResult scan = cmd_scan_min(cf, n_max, s);
  Json out;
  out["cf"] = cf::format_cf(cf);
  out["n_max"] = n_max;
  out["min_P"] = format_real(scan.min_P, s.format);
  out["argmin"] = scan.argmin;
  Json qs = Json::array();
  Real min_q(s.prec);
  bool first = true;
  for (const auto& [qn, P] : scan.q_values) {
    qs.push_back({{"q_n", qn}, {"Q", format_real(P, s.format)}});
    if (first || P < min_q) min_q = P;
    first = false;
  }
  out["Q_n"] = std::move(qs);
  if (!first) out["min_Q"] = format_real(min_q, s.format);
  const PeriodicCF tail = cf.tail();
  Json lim = Json::array();
  Real min_c(s.prec);
  for (std::size_t k = 0; k < tail.period_length(); ++k) {
    const auto rep = limits::limit_Ck(tail, k, {s.T, s.prec});
    lim.push_back({{"k", k}, {"C_k", format_real(rep.C_k, s.format)}, {"tail_bound", rep.tail_bound.to_string(6)}});
    if (k == 0 || rep.C_k < min_c) min_c = rep.C_k;
  }
  out["limits"] = std::move(lim);
  out["min_C_k"] = format_real(min_c, s.format);
  out["violations"] = scan.violations.size();
  return out;
}

PBounds cmd_pbounds(const PeriodicCF& cf, std::uint64_t n_max, const Settings& s) {
  if (n_max < 100) throw DomainError("pbounds needs n_max >= 100");
  if (n_max > s.max_qn) throw BudgetExceeded("n_max " + uint_str(n_max) + " exceeds the budget " + uint_str(s.max_qn));
  const Precision frac_prec(64);
  cf::IncrementalFrac frac(cf::surd_from_cf(cf), n_max, frac_prec);
  Real f(frac_prec);
  // Empirical fit: double precision logs suffice.
  double log_p = 0;
  double run_min = 0;
  double run_max = 0;
  double sx = 0, sx2 = 0, smin = 0, sxmin = 0, smax = 0, sxmax = 0;
  std::uint64_t count = 0;
  PBounds b;
  b.n_max = n_max;
  double ratio = -INFINITY;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    frac.next(f.get());
    const double g = std::min(mpfr_get_d(f.get(), MPFR_RNDN), 1.0 - mpfr_get_d(f.get(), MPFR_RNDN));
    log_p += std::log(2.0 * std::sin(M_PI * g));
    if (n == 1) {
      run_min = run_max = log_p;
      continue;
    }
    run_min = std::min(run_min, log_p);
    run_max = std::max(run_max, log_p);
    const double x = std::log(static_cast<double>(n));
    ratio = std::max(ratio, log_p / x);
    if (n == n_max / 2) b.max_ratio_half = ratio;
    sx += x;
    sx2 += x * x;
    smin += run_min;
    sxmin += x * run_min;
    smax += run_max;
    sxmax += x * run_max;
    ++count;
  }
  const double N = static_cast<double>(count);
  const double var = sx2 - sx * sx / N;
  b.K1_fit = (sxmin - sx * smin / N) / var;
  b.K2_fit = (sxmax - sx * smax / N) / var;
  b.max_ratio = ratio;
  return b;
}

Json to_json(const PBounds& b) {
  return {{"n_max", b.n_max},
          {"K1_fit", b.K1_fit},
          {"K2_fit", b.K2_fit},
          {"max_log_ratio", b.max_ratio},
          {"max_log_ratio_half", b.max_ratio_half}};
}

Table cmd_corollary(const PeriodicCF& beta, std::size_t m_max, const Settings& s) {
  if (beta.purely_periodic()) throw DomainError("corollary needs an expansion with a preperiod");
  const PeriodicCF alpha = beta.tail();
  const std::size_t h = beta.preperiod_length();
  const std::size_t l = alpha.period_length();
  Table t;
  t.columns = {"m", "k", "n_beta", "n_alpha", "Q_beta", "Q_alpha", "difference"};
  for (std::size_t m = 1; m <= m_max; ++m) {
    for (std::size_t k = 0; k < l; ++k) {
      const std::size_t na = l * m + k;
      const std::size_t nb = h + na;
      std::vector<std::string> row{std::to_string(m), std::to_string(k), std::to_string(nb), std::to_string(na)};
      if (cf::denominator(beta, nb) > s.max_qn || cf::denominator(alpha, na) > s.max_qn) {
        row.insert(row.end(), {kBudget, kBudget, kBudget});
      } else {
        const Real qb = eval::sudler_Q(beta, nb, s.prec, mode_of(s));
        const Real qa = eval::sudler_Q(alpha, na, s.prec, mode_of(s));
        row.insert(row.end(), {format_real(qb, s.format), format_real(qa, s.format), abs(qb - qa).to_string(6)});
      }
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

}  // namespace sudler::explorer
