// Commands behind the `sudler` executable, with their CSV and JSON forms.
#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "sudler/cf.hpp"
#include "sudler/real.hpp"

namespace sudler::explorer {

using cf::PeriodicCF;
using Json = nlohmann::ordered_json;

struct Format {
  int digits = 30;
  /// Hexadecimal significands carrying every bit.
  bool exact_repr = false;
};

std::string format_real(const Real& x, const Format& fmt);

/// Rows of decimal strings under fixed column names.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  static Table from_csv(const std::string& text);
  Json to_json() const;
  static Table from_json(const Json& j);

  friend bool operator==(const Table&, const Table&) = default;
};

struct Settings {
  Precision prec{128};
  std::uint64_t max_qn = 2'000'000;
  std::uint64_t T = 1'000'000;
  bool incremental = false;
  Format format;
};

/// c, a, b, one row per k, the identity battery summary, and a preperiod block when present.
Json cmd_constants(const PeriodicCF& cf, const Settings& s);

/// True when every identity in a cmd_constants report passed.
bool identities_passed(const Json& constants);

/// Columns m,k,q_n,A_m,B_m,C_m,Q_direct,rel_residual,limit_gap for m = 2..m_max and all k.
/// Rows past the size budget carry `budget_exceeded` in place of values.
Table cmd_trace(const PeriodicCF& cf, std::size_t m_max, const Settings& s);

/// True if some row of a trace was cut by the budget.
bool trace_hit_budget(const Table& trace);

struct Violation {
  std::uint64_t j = 0;
  std::size_t n = 0;
  Real P_j;
  Real P_qn;
};

struct ScanResult {
  PeriodicCF cf;
  std::pair<std::size_t, std::size_t> n_range;
  std::vector<Violation> violations;
  Real min_P;
  std::uint64_t argmin = 0;
  /// (q_n, P_{q_n}) for n in range.
  std::vector<std::pair<std::uint64_t, Real>> q_values;
  /// Largest relative gap between the scan and direct re-evaluation at sampled j.
  Real spot_check_error;
};

/// P_j for j = 1..q_{n_max}, flagging q_{n-1} < j < q_n with P_j < P_{q_n}.
ScanResult cmd_scan_min(const PeriodicCF& cf, std::size_t n_max, const Settings& s);

Json to_json(const ScanResult& r, const Format& fmt);
ScanResult scan_from_json(const Json& j, Precision prec);

/// Minimum of P_n over the scan, the subsequence Q_n, and the limits C_k when the expansion
/// is purely periodic (for a preperiod, those of its tail).
Json cmd_liminf(const PeriodicCF& cf, std::size_t n_max, const Settings& s);

struct PBounds {
  /// Least-squares slopes of the running minimum and running maximum of log P_n against log n.
  double K1_fit = 0;
  double K2_fit = 0;
  /// max over n of log P_n / log n at the end of the range, and at half the range.
  double max_ratio = 0;
  double max_ratio_half = 0;
  std::uint64_t n_max = 0;
};

PBounds cmd_pbounds(const PeriodicCF& cf, std::uint64_t n_max, const Settings& s);
Json to_json(const PBounds& b);

/// Rows m,k,n_beta,n_alpha,Q_beta,Q_alpha,difference for m = 1..m_max.
Table cmd_corollary(const PeriodicCF& beta, std::size_t m_max, const Settings& s);

}  // namespace sudler::explorer
