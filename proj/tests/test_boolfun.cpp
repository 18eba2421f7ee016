#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lct/boolfun.hpp"
#include "lct/rng.hpp"

using namespace lct;

namespace {

VarSet xy() { return VarSet({"x", "y"}); }

// Independent reference: evaluate a point by explicit variable lookup.
std::map<std::string, int> point_as_map(const CubePoint& pt) {
  std::map<std::string, int> m;
  for (int i = 0; i < pt.domain.size(); ++i) m[pt.domain.at(i)] = pt.value(i);
  return m;
}

BoolFun random_fun(const VarSet& d, RngStream& rng) {
  BoolFun f(d);
  for (std::uint32_t p = 0; p < f.npoints(); ++p) {
    f.set_value(p, rng.uniform_sign());
  }
  return f;
}

CubeSubset random_subset(const VarSet& d, RngStream& rng) {
  CubeSubset s(d);
  for (std::uint32_t p = 0; p < s.npoints(); ++p) {
    if (rng.uniform_bit()) s.set(p);
  }
  return s;
}

}  // namespace

TEST_CASE("point indexing is big-endian with -1 as set bit") {
  VarSet d = xy();
  // index = 2*[x=-1] + [y=-1]
  CHECK(point_as_map({d, 0}) == std::map<std::string, int>{{"x", 1}, {"y", 1}});
  CHECK(point_as_map({d, 1}) ==
        std::map<std::string, int>{{"x", 1}, {"y", -1}});
  CHECK(point_as_map({d, 2}) ==
        std::map<std::string, int>{{"x", -1}, {"y", 1}});
  CHECK(point_as_map({d, 3}) ==
        std::map<std::string, int>{{"x", -1}, {"y", -1}});
}

TEST_CASE("restriction agrees with per-variable lookup") {
  VarSet d({"a", "b", "c"});
  VarSet sub({"b", "c"});
  auto map = restriction_index_map(d, sub);
  for (std::uint32_t p = 0; p < 8; ++p) {
    CubePoint pt{d, p};
    CubePoint r = pt.restrict_to(sub);
    CHECK(r.index == map[p]);
    CHECK(r.value_of("b") == pt.value_of("b"));
    CHECK(r.value_of("c") == pt.value_of("c"));
  }
}

TEST_CASE("dictator function table and hex form") {
  VarSet d = xy();
  BoolFun fx(d);  // f(x,y) = x
  fx.set_value(2, -1);
  fx.set_value(3, -1);
  CHECK(fx.to_hex() == "c");
  CHECK(BoolFun::from_hex(d, "c") == fx);
  CHECK(fx.value(0) == +1);
  CHECK(fx.value(3) == -1);
}

TEST_CASE("hex round-trip across widths") {
  RngStream rng(7);
  for (int n = 0; n <= 5; ++n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    VarSet d(names);
    for (int rep = 0; rep < 20; ++rep) {
      BoolFun f = random_fun(d, rng);
      CHECK(BoolFun::from_hex(d, f.to_hex()) == f);
      CubeSubset s = random_subset(d, rng);
      CHECK(CubeSubset::from_hex(d, s.to_hex()) == s);
    }
  }
  CHECK_THROWS_AS(BoolFun::from_hex(xy(), "zz"), DomainError);
  CHECK_THROWS_AS(BoolFun::from_hex(xy(), "abc"), DomainError);
}

TEST_CASE("chi matches explicit product and is multiplicative") {
  RngStream rng(11);
  VarSet d({"p", "q", "r"});
  for (int rep = 0; rep < 50; ++rep) {
    BoolFun f = random_fun(d, rng);
    BoolFun g = random_fun(d, rng);
    CubeSubset alpha = random_subset(d, rng);
    int prod = 1;
    for (std::uint32_t p : alpha.members()) prod *= f.value(p);
    CHECK(chi(alpha, f) == prod);
    CHECK(chi(alpha, f.times(g)) == chi(alpha, f) * chi(alpha, g));
  }
  CHECK(chi(CubeSubset(d), random_fun(d, rng)) == +1);  // empty subset
}

TEST_CASE("majority counts -1 points with ties to +1") {
  VarSet d = xy();
  BoolFun fx(d);
  fx.set_value(2, -1);
  fx.set_value(3, -1);
  CHECK(majority(fx) == +1);  // exact tie
  fx.set_value(1, -1);
  CHECK(majority(fx) == -1);
  CHECK(majority(BoolFun::constant(d, +1)) == +1);
  CHECK(majority(BoolFun::constant(d, -1)) == -1);
}

TEST_CASE("pi2 keeps odd-preimage points") {
  VarSet d({"a", "b"});
  VarSet sub({"a"});
  // beta = {(+,+), (-,+), (-,-)}: restrictions a=+1 once, a=-1 twice.
  CubeSubset beta(d);
  beta.set(0);
  beta.set(2);
  beta.set(3);
  CubeSubset p = pi2(beta, sub);
  CHECK(p.test(0));        // a = +1, odd count
  CHECK_FALSE(p.test(1));  // a = -1, even count

  RngStream rng(13);
  VarSet d3({"a", "b", "c"});
  for (int rep = 0; rep < 30; ++rep) {
    CubeSubset bb = random_subset(d3, rng);
    CubeSubset pp = pi2(bb, sub);
    for (std::uint32_t q = 0; q < 2; ++q) {
      int count = 0;
      for (std::uint32_t y : bb.members()) {
        if (CubePoint{d3, y}.restrict_to(sub).index == q) ++count;
      }
      CHECK(pp.test(q) == (count % 2 == 1));
    }
  }
}

TEST_CASE("section normalizes the all-plus point") {
  RngStream rng(17);
  VarSet d({"u", "v"});
  for (int rep = 0; rep < 40; ++rep) {
    BoolFun f = random_fun(d, rng);
    auto [s, sign] = section(f);
    CHECK(s.value(0) == +1);
    CHECK((sign == 1 || sign == -1));
    // f == sign * s, and the sign equals m(f * s).
    CHECK(f == (sign == 1 ? s : s.negated()));
    CHECK(majority(f.times(s)) == sign);
    auto [sn, signn] = section(f.negated());
    CHECK(sn == s);
    CHECK(signn == -sign);
  }
}

TEST_CASE("and_fold is pointwise AND in the true=-1 convention") {
  RngStream rng(19);
  VarSet d({"u", "v"});
  for (int rep = 0; rep < 30; ++rep) {
    BoolFun f = random_fun(d, rng);
    BoolFun c = random_fun(d, rng);
    BoolFun a = and_fold(f, c);
    for (std::uint32_t p = 0; p < 4; ++p) {
      int expect = (f.value(p) == -1 && c.value(p) == -1) ? -1 : +1;
      CHECK(a.value(p) == expect);
    }
  }
}

TEST_CASE("section_conditioned picks a canonical pair representative") {
  RngStream rng(23);
  VarSet d({"u", "v"});
  auto policy = SectionPolicy::kLexMinTable;
  for (int rep = 0; rep < 60; ++rep) {
    BoolFun g = random_fun(d, rng);
    BoolFun c = random_fun(d, rng);
    if (c.table().count() == 0) continue;
    auto [s, sign] = section_conditioned(g, c, policy);
    // The representative is one of the two candidates and the sign points
    // back at g AND C.
    BoolFun pos = and_fold(g, c);
    BoolFun neg = and_fold(g.negated(), c);
    CHECK((s == pos || s == neg));
    CHECK(s == (sign == 1 ? pos : neg));
    // Negating g returns the same representative with the opposite sign.
    auto [s2, sign2] = section_conditioned(g.negated(), c, policy);
    CHECK(s2 == s);
    CHECK(sign2 == -sign);
    // Support of the representative lies inside the constraint.
    CHECK(and_fold(s, c) == s);
  }
  CHECK_THROWS_AS(
      section_conditioned(BoolFun(d), BoolFun::constant(d, +1), policy),
      DomainError);
}

TEST_CASE("noise sampling is exact at the edges and reproducible") {
  VarSet d({"u", "v", "w"});
  RngStream rng(29);
  NoiseSpec zero{Rational(0)};
  CHECK(zero.sample(d, rng) == BoolFun::constant(d, +1));

  NoiseSpec third{Rational(1, 3)};
  RngStream a(123), b(123);
  CHECK(third.sample(d, a) == third.sample(d, b));

  // Empirical rate within 4 sigma of 1/3.
  RngStream big(31);
  int minus = 0, total = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    BoolFun mu = third.sample(d, big);
    minus += static_cast<int>(mu.table().count());
    total += static_cast<int>(mu.npoints());
  }
  double rate = static_cast<double>(minus) / total;
  double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / total);
  CHECK(std::abs(rate - 1.0 / 3) < 4 * sigma);

  CHECK_THROWS_AS(NoiseSpec{Rational(1, 2)}, DomainError);
  CHECK_THROWS_AS(NoiseSpec{Rational(-1, 10)}, DomainError);
}

TEST_CASE("function enumeration is complete and ordered") {
  VarSet d({"u"});
  auto fns = enumerate_functions(d);
  REQUIRE(fns.size() == 4);
  // Ascending table order: 00, 01, 10, 11 over points {0,1}.
  CHECK(fns[0] == BoolFun::constant(d, +1));
  CHECK(fns[1].value(0) == -1);
  CHECK(fns[1].value(1) == +1);
  CHECK(fns[3] == BoolFun::constant(d, -1));

  VarSet d2({"u", "v"});
  CHECK(enumerate_functions(d2).size() == 65536 / 4096);  // 2^(2^2) = 16

  std::vector<std::string> many;
  for (int i = 0; i < 5; ++i) many.push_back("m" + std::to_string(i));
  CHECK_THROWS_AS(enumerate_functions(VarSet(many)), CapacityError);
}

TEST_CASE("varset guards") {
  CHECK_THROWS_AS(VarSet({"a", "a"}), DomainError);
  std::vector<std::string> big;
  for (int i = 0; i < 17; ++i) big.push_back("b" + std::to_string(i));
  VarSet overwide(big);  // construction is fine
  CHECK_THROWS_AS(overwide.cube_points(), CapacityError);
  CHECK_THROWS_AS(
      VarSet::disjoint_union(VarSet({"a"}), VarSet({"a", "b"})), DomainError);
  CHECK(VarSet::disjoint_union(VarSet({"a"}), VarSet({"b"})).size() == 2);
}

TEST_CASE("rational exactness") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK((Rational(17, 18) < Rational(1)));
  CHECK(Rational::parse("17/18").to_string() == "17/18");
  CHECK(Rational::parse("-3").to_string() == "-3");
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(Rational::parse("x/2"), DomainError);
}

TEST_CASE("weighted picks follow exact masses") {
  RngStream rng(37);
  std::vector<Rational> w = {Rational(1, 2), Rational(1, 3), Rational(1, 6)};
  std::vector<int> hits(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++hits[rng.pick_weighted(w)];
  for (int i = 0; i < 3; ++i) {
    double p = w[i].to_double();
    double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(hits[i] / double(n) - p) < 4 * sigma);
  }
}
