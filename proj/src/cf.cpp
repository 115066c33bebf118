#include "sudler/cf.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <optional>

#include "sudler/errors.hpp"

namespace sudler::cf {

PeriodicCF::PeriodicCF(PartialQuotient a0, std::vector<PartialQuotient> preperiod,
                       std::vector<PartialQuotient> period)
    : a0_(a0), preperiod_(std::move(preperiod)), period_(std::move(period)) {
  if (period_.empty()) throw DomainError("continued fraction period must be non-empty");
  auto positive = [](PartialQuotient a) { return a >= 1; };
  if (!std::all_of(period_.begin(), period_.end(), positive) ||
      !std::all_of(preperiod_.begin(), preperiod_.end(), positive)) {
    throw DomainError("partial quotients after a0 must be positive");
  }
}

PeriodicCF PeriodicCF::purely(std::vector<PartialQuotient> period) { return PeriodicCF(0, {}, std::move(period)); }

PartialQuotient PeriodicCF::partial_quotient(std::size_t n) const {
  if (n == 0) return a0_;
  const std::size_t i = n - 1;
  if (i < preperiod_.size()) return preperiod_[i];
  return period_[(i - preperiod_.size()) % period_.size()];
}

bool PeriodicCF::primitive_period() const {
  const std::size_t l = period_.size();
  for (std::size_t d = 1; d < l; ++d) {
    if (l % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < l && repeats; ++i) repeats = period_[i] == period_[i - d];
    if (repeats) return false;
  }
  return true;
}

namespace {

class CfParser {
 public:
  explicit CfParser(std::string_view text) : text_(text) {}

  PeriodicCF run() {
    expect('[');
    const PartialQuotient a0 = number(/*allow_zero=*/true);
    expect(';');
    std::vector<PartialQuotient> pre;
    std::vector<PartialQuotient> per;
    for (;;) {
      skip_ws();
      if (peek() == '(') {
        ++pos_;
        skip_ws();
        if (peek() == ')') throw ParseError("empty period", pos_);
        for (;;) {
          per.push_back(number(false));
          skip_ws();
          if (peek() == ',') {
            ++pos_;
            continue;
          }
          expect(')');
          break;
        }
        break;
      }
      pre.push_back(number(false));
      expect(',');
    }
    expect(']');
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("trailing characters", pos_);
    return PeriodicCF(a0, std::move(pre), std::move(per));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) {
      std::string msg = "expected '";
      msg += c;
      msg += "'";
      if (pos_ >= text_.size()) {
        msg += " but reached end of input";
      } else {
        msg += " but found '";
        msg += text_[pos_];
        msg += "'";
      }
      throw ParseError(msg, pos_);
    }
    ++pos_;
  }

  PartialQuotient number(bool allow_zero) {
    skip_ws();
    const std::size_t start = pos_;
    if (peek() == '-') throw ParseError("negative partial quotient", start);
    if (peek() == '+') ++pos_;
    if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected a partial quotient", start);
    PartialQuotient value = 0;
    constexpr auto kMax = std::numeric_limits<PartialQuotient>::max();
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      const auto digit = static_cast<PartialQuotient>(text_[pos_] - '0');
      if (value > (kMax - digit) / 10) throw ParseError("partial quotient out of range", start);
      value = value * 10 + digit;
      ++pos_;
    }
    if (!allow_zero && value == 0) throw ParseError("partial quotient must be positive", start);
    return value;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

PeriodicCF parse_cf(std::string_view text) { return CfParser(text).run(); }

std::string format_cf(const PeriodicCF& cf) {
  std::string out = "[" + std::to_string(cf.a0()) + ";";
  for (auto a : cf.preperiod()) out += std::to_string(a) + ",";
  out += "(";
  for (std::size_t i = 0; i < cf.period().size(); ++i) {
    if (i) out += ",";
    out += std::to_string(cf.period()[i]);
  }
  out += ")]";
  return out;
}

ConvergentTable::ConvergentTable(std::vector<mpz_class> p, std::vector<mpz_class> q)
    : p_(std::move(p)), q_(std::move(q)) {
  if (p_.size() != q_.size() || q_.size() < 2) throw DomainError("convergent table needs indices 0 and 1");
}

ConvergentTable convergents(const PeriodicCF& cf, std::size_t n) {
  if (n < 1) throw DomainError("convergents: n must be >= 1");
  std::vector<mpz_class> p(n + 1);
  std::vector<mpz_class> q(n + 1);
  p[0] = 1;
  q[0] = 0;
  p[1] = static_cast<unsigned long>(cf.a0());
  q[1] = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    const unsigned long a = cf.partial_quotient(i - 1);
    p[i] = a * p[i - 1] + p[i - 2];
    q[i] = a * q[i - 1] + q[i - 2];
  }
  return ConvergentTable(std::move(p), std::move(q));
}

mpz_class denominator(const PeriodicCF& cf, std::size_t n) {
  if (n == 0) return 0;
  mpz_class prev = 0;
  mpz_class cur = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    mpz_class next = cf.partial_quotient(i - 1) * cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

namespace {

void require_purely_periodic(const PeriodicCF& cf, const char* op) {
  if (!cf.purely_periodic()) throw DomainError(std::string(op) + ": expansion must be purely periodic");
}

}  // namespace

PeriodicCF tau(const PeriodicCF& cf, std::size_t u) {
  require_purely_periodic(cf, "tau");
  const auto& d = cf.period();
  if (u >= d.size()) throw DomainError("tau: index out of range");
  std::vector<PartialQuotient> out(d.begin() + static_cast<std::ptrdiff_t>(u), d.end());
  out.insert(out.end(), d.begin(), d.begin() + static_cast<std::ptrdiff_t>(u));
  return PeriodicCF::purely(std::move(out));
}

PeriodicCF sigma(const PeriodicCF& cf, std::size_t u) {
  require_purely_periodic(cf, "sigma");
  const auto& d = cf.period();
  const std::size_t l = d.size();
  if (u >= l) throw DomainError("sigma: index out of range");
  // sigma_0 coincides with the general pattern for u = l.
  const std::size_t w = u == 0 ? l : u;
  std::vector<PartialQuotient> out;
  out.reserve(l);
  for (std::size_t j = w - 1; j >= 1; --j) out.push_back(d[j - 1]);
  for (std::size_t j = l; j >= w; --j) out.push_back(d[j - 1]);
  return PeriodicCF::purely(std::move(out));
}

OstrowskiDigits ostrowski(const mpz_class& N, const PeriodicCF& cf) {
  if (N < 0) throw DomainError("ostrowski: N must be non-negative");
  OstrowskiDigits out;
  if (N == 0) return out;

  // Denominators up to the first one exceeding N.
  std::vector<mpz_class> q{0, 1};
  while (q.back() <= N) {
    const std::size_t i = q.size();
    q.push_back(cf.partial_quotient(i - 1) * q[i - 1] + q[i - 2]);
  }
  const std::size_t top = q.size() - 2;  // largest index with q_top <= N
  out.digits.assign(top, 0);
  mpz_class rest = N;
  for (std::size_t n = top; n >= 1 && rest > 0; --n) {
    if (q[n] > rest) continue;
    mpz_class v = rest / q[n];
    rest -= v * q[n];
    out.digits[n - 1] = v.get_ui();
  }
  while (!out.digits.empty() && out.digits.back() == 0) out.digits.pop_back();
  out.exceeds_literal_v1_bound = !out.digits.empty() && out.digits[0] + 1 >= cf.partial_quotient(1);
  return out;
}

bool ostrowski_admissible(const OstrowskiDigits& digits, const PeriodicCF& cf) {
  const auto& v = digits.digits;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t n = i + 1;
    const PartialQuotient a = cf.partial_quotient(n);
    if (n == 1 ? v[i] + 1 > a : v[i] > a) return false;
    if (n > 1 && v[i] == a && v[i - 1] != 0) return false;
  }
  return true;
}

mpz_class ostrowski_value(const OstrowskiDigits& digits, const PeriodicCF& cf) {
  mpz_class sum = 0;
  mpz_class prev = 0;
  mpz_class cur = 1;
  for (std::size_t i = 0; i < digits.digits.size(); ++i) {
    const std::size_t n = i + 1;
    if (n >= 2) {
      mpz_class next = cf.partial_quotient(n - 1) * cur + prev;
      prev = std::move(cur);
      cur = std::move(next);
    }
    sum += digits.digits[i] * cur;
  }
  return sum;
}

}  // namespace sudler::cf
