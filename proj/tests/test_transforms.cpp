#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lct/fixtures.hpp"
#include "lct/transforms.hpp"

using namespace lct;

namespace {

ExplicitGame agreement_game() {
  ExplicitGame g = ExplicitGame::with_questions({"q0", "q1"},
                                                {{"0", "1"}, {"0", "1"}});
  Rational quarter(1, 4);
  for (std::uint32_t x = 0; x < 2; ++x) {
    for (std::uint32_t y = 0; y < 2; ++y) {
      g.set_mass(x, y, quarter);
      g.accept(x, y, 0, 0);
      g.accept(x, y, 1, 1);
    }
  }
  g.validate();
  return g;
}

SyncStrategy zbasis_strategy(const std::vector<std::string>& questions) {
  SyncStrategy s;
  s.dim = 2;
  PVM z{{(CMatrix(2, 2) << 1, 0, 0, 0).finished(),
         (CMatrix(2, 2) << 0, 0, 0, 1).finished()}};
  for (const auto& q : questions) s.pvms.emplace(q, z);
  return s;
}

}  // namespace

TEST_CASE("games without dead pairs are returned unchanged") {
  ExplicitGame g = agreement_game();
  CHECK(ensure_nonempty_answers(g) == g);
}

TEST_CASE("dead pairs are rerouted onto guess-the-bit questions") {
  ExplicitGame g = agreement_game();
  // Kill the winning answers of the pair (q0, q1).
  g.accepted.erase({0, 1, 0, 0});
  g.accepted.erase({0, 1, 1, 1});
  ExplicitGame r = ensure_nonempty_answers(g);

  CHECK(r.nq() == 5);
  CHECK(r.questions[2] == "d:q0|q1");
  CHECK(r.questions[3] == "d:q0|q1:+1");
  CHECK(r.questions[4] == "d:q0|q1:-1");
  CHECK(r.mass(0, 1) == Rational(0));
  CHECK(r.mass(3, 2) == Rational(1, 8));
  CHECK(r.mass(4, 2) == Rational(1, 8));
  CHECK(r.accepts(3, 2, 0, 0));
  CHECK(r.accepts(4, 2, 1, 1));
  CHECK_FALSE(r.accepts(3, 2, 1, 1));
  CHECK_FALSE(r.accepts(4, 2, 0, 0));

  for (const auto& [x, y] : r.supported_pairs()) {
    bool live = false;
    for (std::uint32_t a = 0; a < r.answers[x].size(); ++a) {
      for (std::uint32_t b = 0; b < r.answers[y].size(); ++b) {
        live = live || r.accepts(x, y, a, b);
      }
    }
    CHECK(live);
  }
  CHECK(ensure_nonempty_answers(r) == r);
}

TEST_CASE("projection splits each pair's mass onto its two coordinates") {
  ExplicitGame g = agreement_game();
  ExplicitGame p = project(g);
  p.validate();
  CHECK(p.nq() == 6);
  CHECK(is_projection(p));

  std::uint32_t pq = p.question_index("p:q0|q1");
  std::uint32_t s0 = p.question_index("q0");
  std::uint32_t s1 = p.question_index("q1");
  CHECK(p.mass(pq, s0) == Rational(1, 8));
  CHECK(p.mass(pq, s1) == Rational(1, 8));
  // The diagonal pair sends both halves to the same single question.
  CHECK(p.mass(p.question_index("p:q0|q0"), s0) == Rational(1, 4));

  CHECK(p.answers[pq] ==
        std::vector<std::string>{"0|0", "0|1", "1|0", "1|1"});
  CHECK(p.accepts(pq, s0, 0, 0));
  CHECK(p.accepts(pq, s1, 0, 0));
  CHECK(p.accepts(pq, s0, 3, 1));
  CHECK(p.accepts(pq, s1, 3, 1));
  CHECK_FALSE(p.accepts(pq, s0, 1, 0));
  CHECK_FALSE(p.accepts(pq, s0, 1, 1));
}

TEST_CASE("single repetition is the identity") {
  ExplicitGame g = agreement_game();
  CHECK(repeat(g, 1) == g);
}

TEST_CASE("doubled agreement game has product structure") {
  ExplicitGame g = agreement_game();
  ExplicitGame r = repeat(g, 2);
  r.validate();
  CHECK(r.nq() == 4);
  CHECK(r.questions[1] == "q0|q1");
  CHECK(r.answers[0] ==
        std::vector<std::string>{"0|0", "0|1", "1|0", "1|1"});
  CHECK(r.accepted.size() == 64);
  for (std::uint32_t x = 0; x < 4; ++x) {
    for (std::uint32_t y = 0; y < 4; ++y) {
      CHECK(r.mass(x, y) == Rational(1, 16));
    }
  }
  // Winning means matching both rounds.
  CHECK(r.accepts(0, 1, 0, 0));
  CHECK(r.accepts(0, 1, 3, 3));
  CHECK_FALSE(r.accepts(0, 1, 0, 1));
}

TEST_CASE("repetition materialization is capped") {
  ExplicitGame g = agreement_game();
  CHECK_THROWS_AS(repeat(g, 7), CapacityError);
}

TEST_CASE("implicit repetition matches the explicit decider") {
  ExplicitGame g = agreement_game();
  ImplicitGame impl = repeat_implicit(g, 2);
  ExplicitGame expl = repeat(g, 2);

  RngStream rng(7);
  for (int round = 0; round < 200; ++round) {
    RngStream sample = rng.child(static_cast<std::uint64_t>(round));
    auto [qa, qb] = impl.sampler(sample);
    std::string xa = std::string(qa["rounds"][0]) + "|" +
                     std::string(qa["rounds"][1]);
    std::string xb = std::string(qb["rounds"][0]) + "|" +
                     std::string(qb["rounds"][1]);
    std::uint32_t xi = expl.question_index(xa);
    std::uint32_t yi = expl.question_index(xb);
    for (std::uint32_t a = 0; a < 4; ++a) {
      for (std::uint32_t b = 0; b < 4; ++b) {
        Payload aa;
        aa["answers"] = {expl.answers[xi][a].substr(0, 1),
                         expl.answers[xi][a].substr(2, 1)};
        Payload ab;
        ab["answers"] = {expl.answers[yi][b].substr(0, 1),
                         expl.answers[yi][b].substr(2, 1)};
        CHECK(impl.decider(qa, qb, aa, ab) == expl.accepts(xi, yi, a, b));
      }
    }
  }

  SUBCASE("sampling is deterministic given the seed") {
    RngStream s1(99);
    RngStream s2(99);
    auto r1 = impl.sampler(s1);
    auto r2 = impl.sampler(s2);
    CHECK(r1.first == r2.first);
    CHECK(r1.second == r2.second);
  }
}

TEST_CASE("commuting strategies lift to the projected game") {
  ExplicitGame g = agreement_game();
  SyncStrategy s = zbasis_strategy({"q0", "q1"});
  SyncStrategy lifted = lift_oracularizable(s, g);

  for (const auto& [label, pvm] : lifted.pvms) {
    CHECK(pvm.validity_residual() < 1e-8);
  }
  ExplicitGame p = project(g);
  CHECK(winning_probability(p, lifted) == doctest::Approx(1.0).epsilon(1e-9));

  SUBCASE("deterministic strategies lift as well") {
    SyncStrategy det;
    det.dim = 1;
    PVM pick0{{CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 0.0)}};
    det.pvms.emplace("q0", pick0);
    det.pvms.emplace("q1", pick0);
    SyncStrategy dl = lift_oracularizable(det, g);
    CHECK(winning_probability(p, dl) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("non-commuting strategies are rejected") {
    SyncStrategy bad = s;
    PVM x{{(CMatrix(2, 2) << 0.5, 0.5, 0.5, 0.5).finished(),
           (CMatrix(2, 2) << 0.5, -0.5, -0.5, 0.5).finished()}};
    bad.pvms.at("q1") = x;
    CHECK_THROWS_AS(lift_oracularizable(bad, g), DomainError);
  }
}

TEST_CASE("perfect strategies project onto the constraint game") {
  Fixture ms = fixture("magic_square");
  ProjectedBcs mp = projected_bcs(ms.game, 2);
  SyncStrategy msp = projected_strategy(*ms.perfect, ms.game, mp);
  CHECK(winning_probability(bcs_game(mp.bcs, pair_dist_matrix(mp)), msp) ==
        doctest::Approx(1.0).epsilon(1e-9));

  Fixture tp = fixture("toy_parity");
  ProjectedBcs tpp = projected_bcs(tp.game, 1);
  SyncStrategy tps = projected_strategy(*tp.perfect, tp.game, tpp);
  CHECK(winning_probability(bcs_game(tpp.bcs, pair_dist_matrix(tpp)), tps) ==
        doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("non-commuting measurements are rejected") {
    SyncStrategy bad = *ms.perfect;
    RngStream rng(23);
    bad.pvms.at("e0") = PVM{random_pvm(4, {1, 1, 1, 1}, rng)};
    CHECK_THROWS_AS(projected_strategy(bad, ms.game, mp), DomainError);
  }

  SUBCASE("weight on losing diagonal answers is rejected") {
    // Answer 2 loses on the diagonal and is used by no winning pair, so a
    // strategy that ever picks it cannot project.
    ExplicitGame g = ExplicitGame::with_questions(
        {"x", "y"}, {{"0", "1", "2"}, {"0", "1", "2"}});
    g.set_mass(0, 1, Rational(1, 2));
    g.set_mass(1, 0, Rational(1, 2));
    for (std::uint32_t a = 0; a < 2; ++a) {
      g.accept(0, 1, a, a);
      g.accept(1, 0, a, a);
      g.accept(0, 0, a, a);
      g.accept(1, 1, a, a);
    }
    g.validate();
    ProjectedBcs proj = projected_bcs(g, 2);
    SyncStrategy wide;
    wide.dim = 3;
    PVM three{{CMatrix::Zero(3, 3), CMatrix::Zero(3, 3), CMatrix::Zero(3, 3)}};
    for (int a = 0; a < 3; ++a) three.elems[a](a, a) = 1.0;
    wide.pvms.emplace("x", three);
    wide.pvms.emplace("y", three);
    CHECK_THROWS_AS(projected_strategy(wide, g, proj), DomainError);
  }
}

TEST_CASE("product strategies multiply values") {
  ExplicitGame g = agreement_game();
  SyncStrategy s = zbasis_strategy({"q0", "q1"});
  ExplicitGame r = repeat(g, 2);

  SyncStrategy p2 = product_strategy(s, g, 2);
  CHECK(p2.dim == 4);
  CHECK(winning_probability(r, p2) == doctest::Approx(1.0).epsilon(1e-9));

  RngStream rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    SyncStrategy rnd = random_sync_strategy(g, 2, rng);
    double v1 = winning_probability(g, rnd);
    double v2 = winning_probability(r, product_strategy(rnd, g, 2));
    CHECK(v2 == doctest::Approx(v1 * v1).epsilon(1e-9));
  }

  SUBCASE("dimension cap") {
    CHECK_THROWS_AS(product_strategy(s, g, 7), CapacityError);
  }
}

TEST_CASE("repetition bound arithmetic") {
  CHECK(repetition_bound(1.0, {10, 1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(repetition_bound(0.0, {4, 1.0, 1.0}) == doctest::Approx(0.0));
  RepetitionParams p{100, 1.0, 2.0};
  CHECK(repetition_bound(0.9, p) ==
        doctest::Approx(std::pow(0.99, 50.0)).epsilon(1e-12));
  CHECK_THROWS_AS(repetition_bound(1.5, p), DomainError);
}
