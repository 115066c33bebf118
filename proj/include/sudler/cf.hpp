// Eventually periodic continued fractions and their convergents.
//
// Convergent indexing is offset by one from the usual convention:
// q_0 = 0, q_1 = 1, p_0 = 1, p_1 = a_0, and q_{n+1} = a_n q_n + q_{n-1}.
// With this offset p_n/q_n exceeds the expanded value for even n and falls
// below it for odd n.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sudler::cf {

using PartialQuotient = std::uint64_t;

/// [a0; a_1..a_h, (b_1..b_l)] with a_i, b_j >= 1 and l >= 1.
class PeriodicCF {
 public:
  PeriodicCF(PartialQuotient a0, std::vector<PartialQuotient> preperiod, std::vector<PartialQuotient> period);

  /// Purely periodic [0; (period)].
  static PeriodicCF purely(std::vector<PartialQuotient> period);

  PartialQuotient a0() const { return a0_; }
  const std::vector<PartialQuotient>& preperiod() const { return preperiod_; }
  const std::vector<PartialQuotient>& period() const { return period_; }
  std::size_t preperiod_length() const { return preperiod_.size(); }
  std::size_t period_length() const { return period_.size(); }

  bool purely_periodic() const { return a0_ == 0 && preperiod_.empty(); }

  /// a_n for n >= 1: preperiod entries first, then the period repeated.
  PartialQuotient partial_quotient(std::size_t n) const;

  /// [0; (period)], the purely periodic tail.
  PeriodicCF tail() const { return purely(period_); }

  /// False when the period is a repetition of a shorter block, e.g. (1,1).
  bool primitive_period() const;

  friend bool operator==(const PeriodicCF&, const PeriodicCF&) = default;

 private:
  PartialQuotient a0_;
  std::vector<PartialQuotient> preperiod_;
  std::vector<PartialQuotient> period_;
};

/// Grammar: `[a0; p1,...,ph, (b1,...,bl)]`, whitespace-insensitive, preperiod optional.
PeriodicCF parse_cf(std::string_view text);
std::string format_cf(const PeriodicCF& cf);

class ConvergentTable {
 public:
  ConvergentTable(std::vector<mpz_class> p, std::vector<mpz_class> q);

  const mpz_class& p(std::size_t n) const { return p_.at(n); }
  const mpz_class& q(std::size_t n) const { return q_.at(n); }
  /// Largest valid index.
  std::size_t max_index() const { return q_.size() - 1; }

 private:
  std::vector<mpz_class> p_;
  std::vector<mpz_class> q_;
};

/// Convergents p_0..p_n, q_0..q_n. Requires n >= 1.
ConvergentTable convergents(const PeriodicCF& cf, std::size_t n);

/// q_n alone; convenience for code that needs a single denominator.
mpz_class denominator(const PeriodicCF& cf, std::size_t n);

/// Rotation (d_{u+1}, ..., d_l, d_1, ..., d_u) of a purely periodic expansion.
PeriodicCF tau(const PeriodicCF& cf, std::size_t u);

/// Reversal-rotation (d_{u-1}, ..., d_1, d_l, ..., d_u); sigma_0 = (d_{l-1}, ..., d_1, d_l),
/// sigma_1 = (d_l, ..., d_1).
PeriodicCF sigma(const PeriodicCF& cf, std::size_t u);

struct OstrowskiDigits {
  /// digits[i] holds v_{i+1}; the last entry is nonzero unless the list is empty.
  std::vector<PartialQuotient> digits;
  /// Set when v_1 >= a_1 - 1, i.e. the strict bound 0 <= v_1 < a_1 - 1 fails.
  /// The standard greedy digits only guarantee v_1 <= a_1 - 1.
  bool exceeds_literal_v1_bound = false;

  std::size_t length() const { return digits.size(); }
};

/// Greedy Ostrowski expansion N = sum v_n q_n.
OstrowskiDigits ostrowski(const mpz_class& N, const PeriodicCF& cf);

/// True when the digits satisfy 0 <= v_1 <= a_1 - 1, 0 <= v_n <= a_n and v_n = a_n => v_{n-1} = 0.
bool ostrowski_admissible(const OstrowskiDigits& digits, const PeriodicCF& cf);

mpz_class ostrowski_value(const OstrowskiDigits& digits, const PeriodicCF& cf);

}  // namespace sudler::cf
