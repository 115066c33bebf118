#include <doctest.h>

#include <chrono>

#include "sudler/cf.hpp"
#include "sudler/errors.hpp"
#include "sudler/explorer.hpp"
#include "sudler/sudler.hpp"
#include "support.hpp"

using namespace sudler;
using namespace sudler::explorer;
using cf::parse_cf;

namespace {

Settings quick() {
  Settings s;
  s.T = 20000;
  return s;
}

}  // namespace

TEST_CASE("constants report") {
  const auto s = quick();
  const Json g = cmd_constants(parse_cf("[0;(1)]"), s);
  CHECK(g.at("c") == "1");
  CHECK(testing::close(Real::parse(g.at("a").get<std::string>(), Precision(128)), "1.6180339887498948482045868343656", 90));
  CHECK(testing::close(Real::parse(g.at("b").get<std::string>(), Precision(128)), "-0.6180339887498948482045868343656", 90));
  CHECK(testing::close(Real::parse(g.at("per_k").at(0).at("abs_ckek").get<std::string>(), Precision(128)),
                       "0.44721359549995793928183473374626", 90));
  CHECK(identities_passed(g));
  CHECK(!g.contains("preperiod"));

  const Json r = cmd_constants(parse_cf("[0;(1,2)]"), s);
  CHECK(r.at("per_k").size() == 2);
  CHECK(r.at("per_k").at(1).at("alpha_tau_k") == "[0;(2,1)]");

  const Json p = cmd_constants(parse_cf("[0;2,(1,2)]"), s);
  REQUIRE(p.contains("preperiod"));
  CHECK(p.at("preperiod").at("per_k").size() == 2);
  CHECK(p.at("preperiod").at("per_k").at(0).at("abs_chk_ehk") == r.at("per_k").at(0).at("abs_ckek"));
  CHECK(identities_passed(p));
}

TEST_CASE("trace columns and residuals") {
  auto s = quick();
  const Table t = cmd_trace(parse_cf("[0;(1,2)]"), 6, s);
  CHECK(t.columns == std::vector<std::string>{"m", "k", "q_n", "A_m", "B_m", "C_m", "Q_direct", "rel_residual", "limit_gap"});
  CHECK(t.rows.size() == 10);
  for (const auto& row : t.rows) CHECK(Real::parse(row[7], Precision(64)) < Real(1e-20, Precision(64)));
  CHECK(!trace_hit_budget(t));
  s.max_qn = 100;
  CHECK(trace_hit_budget(cmd_trace(parse_cf("[0;(1,2)]"), 6, s)));
  CHECK_THROWS_AS(cmd_trace(parse_cf("[0;2,(1,2)]"), 4, s), DomainError);
}

TEST_CASE("golden trace settles") {
  const Table t = cmd_trace(parse_cf("[0;(1)]"), 14, quick());
  Real prev(1L, Precision(128));
  for (std::size_t i = 4; i < t.rows.size(); i += 2) {
    const Real gap = Real::parse(t.rows[i][8], Precision(128));
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("CSV and JSON tables round trip") {
  Settings s = quick();
  const Table t = cmd_trace(parse_cf("[0;(1)]"), 6, s);
  const std::string csv = t.to_csv();
  CHECK(Table::from_csv(csv).to_csv() == csv);
  CHECK(Table::from_csv(csv) == t);
  const std::string js = t.to_json().dump(2);
  CHECK(Table::from_json(Json::parse(js)).to_json().dump(2) == js);
  s.format.exact_repr = true;
  const Table hex = cmd_corollary(parse_cf("[0;3,(2)]"), 3, s);
  CHECK(Table::from_csv(hex.to_csv()).to_csv() == hex.to_csv());
  CHECK_THROWS_AS(Table::from_csv("a,b\n1\n"), ParseError);
}

TEST_CASE("minimum scan") {
  const Settings s = quick();
  const auto golden = cmd_scan_min(parse_cf("[0;(1)]"), 12, s);
  CHECK(golden.violations.empty());
  CHECK(golden.spot_check_error < Real(1e-15, Precision(64)));
  bool at_denominator = false;
  for (const auto& [q, P] : golden.q_values) at_denominator = at_denominator || q == golden.argmin;
  CHECK(at_denominator);
  const auto silver = cmd_scan_min(parse_cf("[0;(2)]"), 10, s);
  CHECK(silver.violations.empty());
  CHECK(silver.q_values.back().first == 2378);
  CHECK(testing::rel_close(silver.q_values.back().second,
                           eval::sudler_Q(parse_cf("[0;(2)]"), 10, Precision(128)), 100));

  const std::string js = to_json(golden, s.format).dump();
  CHECK(to_json(scan_from_json(Json::parse(js), Precision(128)), s.format).dump() == js);

  Settings tight = s;
  tight.max_qn = 50;
  CHECK_THROWS_AS(cmd_scan_min(parse_cf("[0;(1)]"), 12, tight), BudgetExceeded);
}

TEST_CASE("liminf report") {
  const Settings s = quick();
  const Json g = cmd_liminf(parse_cf("[0;(1)]"), 20, s);
  const Real minQ = Real::parse(g.at("min_Q").get<std::string>(), Precision(64));
  CHECK(minQ.sign() > 0);
  CHECK(g.at("limits").size() == 1);
  const Json r = cmd_liminf(parse_cf("[0;(1,2)]"), 14, s);
  CHECK(r.at("limits").size() == 2);
  const Json tiny = cmd_liminf(parse_cf("[0;(1)]"), 2, s);
  CHECK(tiny.at("Q_n").size() == 1);
}

TEST_CASE("polynomial bounds fit") {
  const Settings s = quick();
  const auto t0 = std::chrono::steady_clock::now();
  const auto small = cmd_pbounds(parse_cf("[0;(1)]"), 100, s);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(1));
  CHECK(small.K1_fit <= 0);
  const auto b = cmd_pbounds(parse_cf("[0;(1)]"), 1'000'000, s);
  CHECK(b.K1_fit <= 0);
  CHECK(b.K2_fit >= 1);
  CHECK(b.max_ratio >= b.max_ratio_half);
  CHECK_THROWS_AS(cmd_pbounds(parse_cf("[0;(1)]"), 50, s), DomainError);
}

TEST_CASE("preperiod corollary") {
  const Settings s = quick();
  const Table t = cmd_corollary(parse_cf("[0;3,(2)]"), 10, s);
  CHECK(t.rows.size() == 10);
  const Real first = Real::parse(t.rows.front()[6], Precision(64));
  const Real last = Real::parse(t.rows.back()[6], Precision(64));
  CHECK(last < first * Real(1e-3, Precision(64)));
  CHECK_THROWS_AS(cmd_corollary(parse_cf("[0;(2)]"), 3, s), DomainError);
}
