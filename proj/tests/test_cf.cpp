#include <doctest.h>

#include <functional>
#include <random>
#include <vector>

#include "sudler/cf.hpp"
#include "sudler/errors.hpp"
#include "sudler/surd.hpp"

using namespace sudler;
using namespace sudler::cf;

namespace {

std::vector<long> qs(const PeriodicCF& cf, std::size_t n) {
  const auto ct = convergents(cf, n);
  std::vector<long> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(ct.q(i).get_si());
  return out;
}

// All digit vectors of length <= z satisfying the admissibility rules, mapped to their values.
void enumerate_admissible(const PeriodicCF& cf, std::size_t z, long limit, std::vector<std::vector<OstrowskiDigits>>& by_value) {
  std::vector<PartialQuotient> v(z, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == z) {
      OstrowskiDigits d;
      d.digits = v;
      while (!d.digits.empty() && d.digits.back() == 0) d.digits.pop_back();
      if (!ostrowski_admissible(d, cf)) return;
      const long value = ostrowski_value(d, cf).get_si();
      if (value <= limit) by_value[value].push_back(d);
      return;
    }
    const PartialQuotient a = cf.partial_quotient(i + 1);
    for (PartialQuotient x = 0; x <= a; ++x) {
      v[i] = x;
      rec(i + 1);
    }
    v[i] = 0;
  };
  rec(0);
}

}  // namespace

TEST_CASE("parse and format") {
  CHECK(parse_cf("[0;(1)]") == PeriodicCF(0, {}, {1}));
  CHECK(parse_cf("[0;(1,2)]") == PeriodicCF(0, {}, {1, 2}));
  CHECK(parse_cf("[0;2,(1,2)]") == PeriodicCF(0, {2}, {1, 2}));
  CHECK(parse_cf(" [ 3 ; 1 , 4 , ( 1 , 5 ) ] ") == PeriodicCF(3, {1, 4}, {1, 5}));
  for (const char* text : {"[0;(1)]", "[0;(1,2)]", "[0;2,(1,2)]", "[7;1,2,3,(4,5,6)]"}) {
    CHECK(format_cf(parse_cf(text)) == text);
  }
}

TEST_CASE("parse errors carry positions") {
  auto position_of = [](const char* text) -> long {
    try {
      parse_cf(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position_of("[0;()]") == 4);
  CHECK(position_of("[0;(0)]") == 4);
  CHECK(position_of("[0;(-1)]") == 4);
  CHECK(position_of("[0;(1)") == 6);
  CHECK(position_of("[0;(1)]x") == 7);
  CHECK(position_of("0;(1)]") == 0);
  CHECK(position_of("[0;2,0,(1)]") == 5);
  CHECK(position_of("[0;(99999999999999999999999)]") == 4);
  CHECK_THROWS_AS(PeriodicCF(0, {}, {}), DomainError);
}

TEST_CASE("convergent denominators") {
  CHECK(qs(parse_cf("[0;(1)]"), 7) == std::vector<long>{0, 1, 1, 2, 3, 5, 8, 13});
  CHECK(qs(parse_cf("[0;(2)]"), 5) == std::vector<long>{0, 1, 2, 5, 12, 29});
  CHECK(qs(parse_cf("[0;(1,2)]"), 7) == std::vector<long>{0, 1, 1, 3, 4, 11, 15, 41});
  // Same list from the two-step recursion q_n = 4 q_{n-2} - q_{n-4}, started from q_0..q_3 by hand.
  std::vector<long> q{0, 1, 1, 3};
  for (std::size_t n = 4; n <= 7; ++n) q.push_back(4 * q[n - 2] - q[n - 4]);
  CHECK(q == qs(parse_cf("[0;(1,2)]"), 7));
  CHECK_THROWS_AS(convergents(parse_cf("[0;(1)]"), 0), DomainError);
  CHECK(denominator(parse_cf("[0;(1,2)]"), 7) == 41);
  const auto ct = convergents(parse_cf("[0;(1)]"), 3);
  CHECK(ct.p(0) == 1);
  CHECK(ct.p(1) == 0);
}

TEST_CASE("tau and sigma") {
  const auto a = parse_cf("[0;(1,2)]");
  CHECK(tau(a, 0) == a);
  CHECK(tau(a, 1) == parse_cf("[0;(2,1)]"));
  const auto b = parse_cf("[0;(1,2,3)]");
  CHECK(sigma(b, 1) == parse_cf("[0;(3,2,1)]"));
  CHECK(sigma(b, 0) == parse_cf("[0;(2,1,3)]"));
  CHECK(sigma(b, 2) == parse_cf("[0;(1,3,2)]"));
  const auto c = parse_cf("[0;(1,1,2,5)]");
  for (std::size_t u = 1; u < 4; ++u) CHECK(sigma(c, u) == sigma(tau(c, u), 0));
  CHECK_THROWS_AS(tau(a, 2), DomainError);
  CHECK_THROWS_AS(sigma(parse_cf("[0;2,(1,2)]"), 0), DomainError);
}

TEST_CASE("primitive period diagnostic") {
  CHECK(parse_cf("[0;(1,2)]").primitive_period());
  CHECK_FALSE(parse_cf("[0;(1,1)]").primitive_period());
  CHECK_FALSE(parse_cf("[0;(1,2,1,2)]").primitive_period());
}

TEST_CASE("ostrowski examples") {
  const auto golden = parse_cf("[0;(1)]");
  CHECK(ostrowski(0, golden).digits.empty());
  const auto twelve = ostrowski(12, golden);
  CHECK(twelve.digits == std::vector<PartialQuotient>{0, 1, 0, 1, 0, 1});  // 1 + 3 + 8
  CHECK(ostrowski_value(twelve, golden) == 12);
  const auto ct = convergents(parse_cf("[0;(1,2)]"), 12);
  for (std::size_t n = 3; n <= 12; ++n) {
    const auto d = ostrowski(ct.q(n), parse_cf("[0;(1,2)]"));
    CHECK(d.length() == n);
    CHECK(d.digits.back() == 1);
    CHECK(ostrowski_value(d, parse_cf("[0;(1,2)]")) == ct.q(n));
  }
}

TEST_CASE("ostrowski agrees with exhaustive enumeration up to 100") {
  for (const char* text : {"[0;(1)]", "[0;(2)]", "[0;(1,2)]", "[0;(3,1)]", "[0;2,(1,3)]"}) {
    const auto cf = parse_cf(text);
    std::size_t z = 1;
    while (denominator(cf, z + 1) <= 100) ++z;
    std::vector<std::vector<OstrowskiDigits>> by_value(101);
    enumerate_admissible(cf, z, 100, by_value);
    for (long n = 1; n <= 100; ++n) {
      INFO(text << " N=" << n);
      REQUIRE(by_value[n].size() == 1);
      CHECK(by_value[n][0].digits == ostrowski(n, cf).digits);
    }
  }
}

TEST_CASE("ostrowski round trip to 1e5") {
  for (const char* text : {"[0;(1)]", "[0;(1,2)]", "[0;(2,3)]"}) {
    const auto cf = parse_cf(text);
    for (long n = 0; n <= 100000; ++n) {
      const auto d = ostrowski(n, cf);
      if (ostrowski_value(d, cf) != n || !ostrowski_admissible(d, cf)) {
        FAIL(text << " N=" << n);
      }
    }
  }
}

TEST_CASE("literal v1 bound flag") {
  // With a_1 = 1 the printed bound v_1 < 0 fails for every N >= 1.
  CHECK(ostrowski(1, parse_cf("[0;(1)]")).exceeds_literal_v1_bound);
  CHECK(ostrowski(2, parse_cf("[0;(1)]")).exceeds_literal_v1_bound);
  // a_1 = 3: v_1 = 2 is admissible but breaks v_1 < 2.
  const auto cf = parse_cf("[0;(3)]");
  CHECK(ostrowski(2, cf).digits == std::vector<PartialQuotient>{2});
  CHECK(ostrowski(2, cf).exceeds_literal_v1_bound);
  CHECK_FALSE(ostrowski(1, cf).exceeds_literal_v1_bound);
  CHECK_FALSE(ostrowski(3, cf).exceeds_literal_v1_bound);
}
