#include <doctest.h>

#include <random>

#include "sudler/cf.hpp"
#include "sudler/errors.hpp"
#include "sudler/limits.hpp"
#include "sudler/sudler.hpp"
#include "support.hpp"

using namespace sudler;
using namespace sudler::limits;
using cf::parse_cf;
using testing::close;

TEST_CASE("limit of A") {
  const Precision p(160);
  CHECK(close(limit_A(parse_cf("[0;(1)]"), 0, p), "2.8099258924162905572625498572819579197866", 125));
  CHECK(close(limit_A(parse_cf("[0;(1,2)]"), 0, p), "1.8137993642342178505940782576421557322841", 125));
  // A_m approaches the limit geometrically
  const auto cf = parse_cf("[0;(1)]");
  const Real lim = limit_A(cf, 0, p);
  Real prev(1L, p);
  for (std::size_t m : {6, 10, 14, 18}) {
    eval::DecomposeOptions o;
    o.with_direct = false;
    const Real gap = abs(eval::decompose(cf, m, 0, p, o).A_m - lim);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < testing::two_pow(-20));
}

namespace {

struct Frozen {
  const char* cf;
  std::size_t k;
  const char *C, *g1, *g2, *Ck, *su;
};

// Independent series at T = 2000, with |c_k e_k| = q_n |q_n alpha - p_n| and alpha_sigma_k = q_{n-1}/q_n
// taken far along the residue class.
const Frozen kT2000[] = {
    {"[0;(1)]", 0, "0.9149992567112852135266972689951524805528", "0.02631106686432103342469707303590140939342",
     "0.006612567813818816102103637985172868111684", "2.407235069447498605529609132566301412042",
     "0.0871280728336238682316850782033"},
    {"[0;(1,2)]", 0, "0.9631256703065507067905405179414065573811", "0.06308792452758271912343381685463225789438",
     "0.003902931510020738532492904506647147101626", "1.527863955623305688132732373691710561246",
     "0.037262880983483559302167381804"},
    {"[0;(1,2)]", 1, "0.8776400450882843578074599952214305112233", "-0.07579144365067622024929888813737787742231",
     "0.01126190496705561381453119958356628702012", "3.622307517765640828896304805673594372537",
     "0.127461415430968042836373998917"},
    {"[0;(2)]", 0, "0.9504098738486359883251630331768234457867", "-0.002939440844177144510795675715161042763944",
     "0.004049409604765674902046134079044173090368", "2.106598195383406791083666487389727857768",
     "0.0503719238227643736039314497461"},
    {"[0;(1,1,2)]", 2, "0.8972302790296556722953469146326644062893", "0.06783866545856161919274196734429369619055",
     "0.01019193603361795151094812865223497014064", "2.287697141411205873525242803105369012175",
     "0.10573516462360523564996702222"},
};

}  // namespace

TEST_CASE("truncated limit series match an independent evaluation") {
  LimitOptions o;
  o.T = 2000;
  o.prec = Precision(160);
  for (const auto& f : kT2000) {
    CAPTURE(f.cf);
    CAPTURE(f.k);
    const auto r = limit_Ck(parse_cf(f.cf), f.k, o);
    CHECK(close(r.C_lim, f.C, 90));
    CHECK(close(r.gamma1, f.g1, 90));
    CHECK(close(r.gamma2, f.g2, 90));
    CHECK(close(r.C_k, f.Ck, 90));
    CHECK(close(r.sum_inv_u2, f.su, 90));
    CHECK(testing::rel_close(r.C_k, r.A_lim * r.B_lim * r.C_lim, 150));
    CHECK(r.prefix_bound_ok);
  }
}

TEST_CASE("gamma2 first term") {
  const auto g = gamma2(parse_cf("[0;(1)]"), 0, 1, Precision(160));
  CHECK(close(g.value, "0.001444257098143093506169781544420365520871", 140));
  CHECK(gamma2(parse_cf("[0;(1)]"), 0, 10000, Precision(64)).tail_bound < Real(5e-5, Precision(64)));
}

TEST_CASE("C product bracket contains the refinement") {
  const Precision p(128);
  for (const char* text : {"[0;(1)]", "[0;(2,3)]"}) {
    const auto cf = parse_cf(text);
    for (std::uint64_t T : {10ull, 1000ull}) {
      const auto a = limit_C(cf, 0, T, p);
      const auto b = limit_C(cf, 0, 2 * T, p);
      CHECK(a.lower <= b.value);
      CHECK(b.value <= a.value);
      CHECK(a.min_u > Real(1L, p));
      CHECK(a.value < Real(1L, p));
      CHECK(a.value.sign() > 0);
    }
  }
}

TEST_CASE("summability of 1/u^2") {
  const Precision p(96);
  const auto golden = limit_C(parse_cf("[0;(1)]"), 0, 100000, p);
  CHECK(golden.sum_inv_u2 <= Real::parse("0.165194824976758022060841519205", p));
  for (const char* text : {"[0;(1,2)]", "[0;(2,3)]", "[0;(1,1,2)]"}) {
    const auto cf = parse_cf(text);
    for (std::size_t k = 0; k < cf.period_length(); ++k) {
      CHECK(limit_C(cf, k, 100000, p).sum_inv_u2 < Real(0.49, p));
    }
  }
}

TEST_CASE("gamma1 truncation is self consistent") {
  const Precision p(128);
  const auto cf = parse_cf("[0;(1,2)]");
  for (std::size_t k = 0; k < 2; ++k) {
    const auto a = gamma1(cf, k, 50000, p);
    const auto b = gamma1(cf, k, 100000, p);
    CHECK(abs(a.value - b.value) < a.tail_estimate);
    CHECK(a.prefix_bound_ok);
  }
}

TEST_CASE("limit of B against finite products") {
  // B_m -> B_lim slowly; at q_n ~ 10^4 the gap is far below one percent.
  const Precision p(128);
  const auto cf = parse_cf("[0;(1)]");
  const auto r = limit_Ck(cf, 0, {200000, p});
  eval::DecomposeOptions o;
  o.with_direct = false;
  const Real g20 = abs(eval::decompose(cf, 20, 0, p, o).B_m - r.B_lim);
  const Real g24 = abs(eval::decompose(cf, 24, 0, p, o).B_m - r.B_lim);
  CHECK(g20 < Real(1e-4, p));
  CHECK(g24 < g20);
  CHECK(limit_B(Real(0L, p), Real(0L, p)) == Real(1L, p));
}

TEST_CASE("limit JSON") {
  const auto r = limit_Ck(parse_cf("[0;(1)]"), 0, {1000, Precision(96)});
  const auto j = to_json(r, 20);
  CHECK(j.at("k") == 0);
  CHECK(j.at("T") == 1000);
  CHECK(j.at("C_k").get<std::string>().rfind("2.40", 0) == 0);
}

TEST_CASE("block sums of fractional parts") {
  const auto golden = parse_cf("[0;(1)]");
  const Precision p(64);
  CHECK(sumfrac_check(golden, Real(0L, p), 1, 21));
  CHECK(sumfrac_check(golden, Real(0L, p), 3, 21));
  CHECK_THROWS_AS(sumfrac_check(golden, Real(0L, p), 1, 20), DomainError);
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto cf = parse_cf("[0;(1,2)]");
  for (int i = 0; i < 100; ++i) {
    CHECK(sumfrac_check(cf, Real(unit(rng), p), 1 + i % 3, 15));
  }
}

TEST_CASE("gamma2 inner sum: closed form against explicit powers") {
  const Precision p(160);
  const auto cf = parse_cf("[0;(1,2)]");
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t t = 1 + rng() % 1'000'000;
    const Real h = eval::perturbed_row(cf, 20, 1, t, p).h_inf_t;
    Real series(0L, p);
    Real power = h;
    for (long j = 2; j <= 50; ++j) {
      power *= h;
      series += power / j;
    }
    const Real closed = -log(Real(1L, p) - h) - h;
    CHECK(abs(closed - series) < Real(1e-30, p));
  }
}
