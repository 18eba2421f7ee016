#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "lct/fixtures.hpp"
#include "lct/serialize.hpp"
#include "lct/transforms.hpp"

using namespace lct;

namespace {

TestParams toy_params(Rational eps) {
  Fixture fx = fixture("toy_parity");
  ProjectedBcs proj = projected_bcs(fx.game, 1);
  TestParams p{NoiseSpec(eps)};
  p.bcs = proj.bcs;
  p.dist = proj.dist;
  return p;
}

}  // namespace

TEST_CASE("rationals and matrices round trip") {
  Rational r(22, 7);
  CHECK(rational_from_json(rational_json(r)) == r);
  CHECK(rational_json(Rational(-3)) == Payload("-3"));
  CHECK_THROWS_AS(rational_from_json(Payload(7)), DomainError);

  RngStream rng(4);
  CMatrix m = random_unitary(3, rng);
  CMatrix back = matrix_from_json(matrix_json(m));
  CHECK(max_abs(back - m) == 0.0);
  CHECK_THROWS_AS(matrix_from_json(Payload::array()), DomainError);
}

TEST_CASE("games round trip through their sparse decider") {
  for (const auto& name : fixture_names()) {
    ExplicitGame g = fixture(name).game;
    ExplicitGame back = game_from_json(game_json(g));
    CHECK(back == g);
  }
  ExplicitGame ms = fixture("magic_square").game;
  CHECK(game_json(ms)["provenance"] ==
        Payload::array({"lcs_game", "symmetrized", "fixture:magic_square"}));
}

TEST_CASE("constraint systems round trip") {
  Fixture fx = fixture("magic_square");
  REQUIRE(fx.lcs.has_value());
  const Lcs& l = *fx.lcs;

  Lcs lback = lcs_from_json(lcs_json(l));
  CHECK(lback.parity == l.parity);
  CHECK(lback.bcs.variables == l.bcs.variables);
  REQUIRE(lback.bcs.constraints.size() == l.bcs.constraints.size());
  for (std::size_t i = 0; i < l.bcs.constraints.size(); ++i) {
    CHECK(lback.bcs.constraints[i].context == l.bcs.constraints[i].context);
    CHECK(lback.bcs.constraints[i].satisfying ==
          l.bcs.constraints[i].satisfying);
  }

  ProjectedBcs proj = projected_bcs(fixture("toy_parity").game, 1);
  ProjSupportDist dback = dist_from_json(dist_json(proj.dist));
  REQUIRE(dback.entries.size() == proj.dist.entries.size());
  for (std::size_t i = 0; i < dback.entries.size(); ++i) {
    CHECK(dback.entries[i].alice == proj.dist.entries[i].alice);
    CHECK(dback.entries[i].bob == proj.dist.entries[i].bob);
    CHECK(dback.entries[i].mass == proj.dist.entries[i].mass);
  }
}

TEST_CASE("strategies round trip per outcome") {
  SyncStrategy s = *fixture("magic_square").quantum;
  SyncStrategy back = strategy_from_json(strategy_json(s));
  CHECK(back.dim == s.dim);
  REQUIRE(back.pvms.size() == s.pvms.size());
  for (const auto& [label, pvm] : s.pvms) {
    const PVM& bp = back.pvm(label);
    REQUIRE(bp.elems.size() == pvm.elems.size());
    for (std::size_t a = 0; a < pvm.elems.size(); ++a) {
      CHECK(max_abs(bp.elems[a] - pvm.elems[a]) == 0.0);
    }
  }
}

TEST_CASE("estimates and test parameters round trip") {
  ValueEstimate e{0.75, 0.01, 40000, EstimateMethod::kMonteCarlo};
  ValueEstimate eb = estimate_from_json(estimate_json(e));
  CHECK(eb.point == e.point);
  CHECK(eb.radius == e.radius);
  CHECK(eb.samples == e.samples);
  CHECK(eb.method == e.method);

  TestParams t = toy_params(Rational(1, 100));
  t.u = 2;
  t.seed = 99;
  TestParams tb = params_from_json(params_json(t));
  CHECK(tb.epsilon.eps == t.epsilon.eps);
  CHECK(tb.u == t.u);
  CHECK(tb.seed == t.seed);
  CHECK(tb.record_mu == t.record_mu);
  CHECK(tb.policy == t.policy);
  CHECK(params_json(tb) == params_json(t));
}

TEST_CASE("transcript rounds serialize as self-contained lines") {
  TestParams t = toy_params(Rational(1, 8));
  t.record_mu = true;
  RngStream rng(31);
  auto [aq, bq] = sample_round(t, rng);
  std::array<int, 3> a{answer_parity_rhs(aq, t.policy), 1, 1};
  int b = a[static_cast<int>(bq.slot)];

  TranscriptRound round;
  round.alice_q = aq;
  round.bob_q = bq;
  round.answer_a = Payload{{"bits", {0, 0, 0}}};
  round.answer_b = Payload{{"bits", {0}}};
  round.verdict = decide(aq, bq, a, b, t.policy);
  round.seed = 31;

  Payload line = round_json(round);
  CHECK(line.at("verdict").at("accept") == true);
  TranscriptRound back = round_from_json(line);
  CHECK(round_json(back) == line);
}

TEST_CASE("audit reports carry named inequality entries") {
  AuditReport r;
  r.epsilon = 0.01;
  r.delta = 0.29;
  r.entries.push_back({"sample-entry", 0.25, 0.5, 0.25, true});
  r.all_pass = true;
  Payload p = audit_json(r);
  CHECK(p.at("entries").size() == 1);
  CHECK(p.at("entries").at(0).at("name") == "sample-entry");
  CHECK(p.at("entries").at(0).at("pass") == true);
  CHECK(p.at("all_pass") == true);
}

TEST_CASE("canonical dumps are byte stable") {
  TestParams t = toy_params(Rational(1, 100));
  Payload p = params_json(t);
  std::string once = dump_canonical(p);
  std::string twice = dump_canonical(params_json(toy_params(Rational(1, 100))));
  CHECK(once == twice);
  CHECK(dump_canonical(Payload::parse(once)) == once);
  CHECK(once.back() == '\n');
}

TEST_CASE("json files round trip") {
  std::string path = "serialize_roundtrip_tmp.json";
  Payload p = game_json(fixture("chsh").game);
  write_json_file(path, p);
  CHECK(read_json_file(path) == p);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_json_file("no_such_directory/missing.json"),
                  DomainError);
}
