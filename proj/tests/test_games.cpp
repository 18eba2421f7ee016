#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lct/games.hpp"

using namespace lct;

namespace {

// Two questions, one shared bit, win iff the bits agree.
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

Bcs two_parity_bcs() {
  Bcs b;
  b.variables = VarSet({"x", "y", "z"});
  Constraint c0;
  c0.context = VarSet({"x", "y"});
  c0.satisfying = CubeSubset(c0.context);
  c0.satisfying.set(0);
  c0.satisfying.set(3);
  Constraint c1;
  c1.context = VarSet({"y", "z"});
  c1.satisfying = CubeSubset(c1.context);
  c1.satisfying.set(1);
  c1.satisfying.set(2);
  b.constraints = {c0, c1};
  return b;
}

}  // namespace

TEST_CASE("explicit game validation") {
  ExplicitGame g = agreement_game();
  CHECK_NOTHROW(g.validate());

  SUBCASE("mass must sum to one") {
    g.set_mass(0, 0, Rational(0));
    CHECK_THROWS_AS(g.validate(), DomainError);
  }
  SUBCASE("negative mass rejected") {
    g.set_mass(0, 0, Rational(-1, 4));
    g.set_mass(0, 1, Rational(1, 2));
    CHECK_THROWS_AS(g.validate(), DomainError);
  }
  SUBCASE("accepted tuples must be in range") {
    CHECK_THROWS_AS(g.accept(0, 0, 2, 0), DomainError);
  }
  SUBCASE("label lookups") {
    CHECK(g.question_index("q1") == 1);
    CHECK(g.answer_index(0, "1") == 1);
    CHECK_THROWS_AS(g.question_index("zz"), DomainError);
  }
}

TEST_CASE("synchronicity predicate") {
  ExplicitGame g = agreement_game();
  CHECK(is_synchronous(g));

  SUBCASE("asymmetric distribution") {
    g.set_mass(0, 1, Rational(1, 2));
    g.set_mass(1, 0, Rational(0));
    CHECK_FALSE(is_synchronous(g));
  }
  SUBCASE("diagonal accepting unequal answers") {
    g.accept(0, 0, 0, 1);
    CHECK_FALSE(is_synchronous(g));
  }
}

TEST_CASE("projection predicate") {
  ExplicitGame xorg = ExplicitGame::with_questions({"a", "b"},
                                                   {{"0", "1"}, {"0", "1"}});
  xorg.set_mass(0, 1, Rational(1, 2));
  xorg.set_mass(1, 0, Rational(1, 2));
  for (std::uint32_t a = 0; a < 2; ++a) {
    xorg.accept(0, 1, a, a);
    xorg.accept(1, 0, a, 1 - a);
  }
  xorg.validate();
  CHECK(is_projection(xorg));

  ExplicitGame loose = agreement_game();
  loose.accept(0, 1, 0, 1);
  CHECK_FALSE(is_projection(loose));
}

TEST_CASE("assignment labels round-trip") {
  CHECK(assignment_label(3, 0) == "000");
  CHECK(assignment_label(3, 5) == "101");
  CHECK(assignment_from_label(3, "101") == 5);
  for (std::uint32_t p = 0; p < 16; ++p) {
    CHECK(assignment_from_label(4, assignment_label(4, p)) == p);
  }
  CHECK_THROWS_AS(assignment_from_label(2, "0"), DomainError);
  CHECK_THROWS_AS(assignment_from_label(2, "0x"), DomainError);
}

TEST_CASE("constraint-constraint game checks context agreement") {
  Bcs b = two_parity_bcs();
  PairDist pi(2, std::vector<Rational>(2, Rational(1, 4)));
  ExplicitGame g = bcs_game(b, pi);
  g.validate();
  CHECK(is_synchronous(g));

  CHECK(g.answers[0] == std::vector<std::string>{"00", "11"});
  CHECK(g.answers[1] == std::vector<std::string>{"01", "10"});

  // Identical contexts: agreement means equality.
  CHECK(g.accepts(0, 0, 0, 0));
  CHECK(g.accepts(0, 0, 1, 1));
  CHECK_FALSE(g.accepts(0, 0, 0, 1));

  // Overlap {y}: "00" has y=+1, matching "01" (y=+1) but not "10".
  CHECK(g.accepts(0, 1, 0, 0));
  CHECK_FALSE(g.accepts(0, 1, 0, 1));
  CHECK(g.accepts(0, 1, 1, 1));
  CHECK_FALSE(g.accepts(0, 1, 1, 0));
}

TEST_CASE("constraint-constraint game with disjoint contexts accepts all") {
  Bcs b;
  b.variables = VarSet({"x", "y"});
  Constraint c0;
  c0.context = VarSet({"x"});
  c0.satisfying = CubeSubset(c0.context);
  c0.satisfying.set(0);
  c0.satisfying.set(1);
  Constraint c1;
  c1.context = VarSet({"y"});
  c1.satisfying = CubeSubset(c1.context);
  c1.satisfying.set(1);
  b.constraints = {c0, c1};
  PairDist pi(2, std::vector<Rational>(2, Rational(0)));
  pi[0][1] = Rational(1, 2);
  pi[1][0] = Rational(1, 2);
  ExplicitGame g = bcs_game(b, pi);
  for (std::uint32_t a = 0; a < 2; ++a) {
    CHECK(g.accepts(0, 1, a, 0));
    CHECK(g.accepts(1, 0, 0, a));
  }
}

TEST_CASE("projecting a single-question game yields one diagonal entry") {
  ExplicitGame g = ExplicitGame::with_questions({"q"}, {{"a", "b"}});
  g.set_mass(0, 0, Rational(1));
  g.accept(0, 0, 0, 0);
  g.accept(0, 0, 1, 1);
  ProjectedBcs p = projected_bcs(g, 1);
  CHECK(p.bcs.constraints.size() == 1);
  CHECK(p.dist.entries.size() == 1);
  CHECK(p.dist.entries[0].alice == 0);
  CHECK(p.dist.entries[0].bob == 0);
  CHECK(p.dist.entries[0].mass == Rational(1));
  CHECK(p.bcs.constraints[0].satisfying.count() == 2);
}

TEST_CASE("projected system of a two-question game") {
  ExplicitGame g = agreement_game();
  ProjectedBcs p = projected_bcs(g, 1);

  CHECK(p.bcs.variables.names() ==
        std::vector<std::string>{"qq0#0", "qq1#0"});
  // Two singles, two diagonal supports, two ordered cross pairs.
  CHECK(p.bcs.constraints.size() == 4);
  CHECK(p.single_of_question == std::vector<std::size_t>{0, 1});
  CHECK(p.pair_of_questions.size() == 2);

  std::size_t k01 = p.pair_of_questions.at({0, 1});
  CHECK(p.bcs.constraints[k01].context.size() == 2);
  // Winning pairs of (q0, q1) are the equal-bit pairs: points 00 and 11.
  CHECK(p.bcs.constraints[k01].satisfying.test(0));
  CHECK(p.bcs.constraints[k01].satisfying.test(3));
  CHECK(p.bcs.constraints[k01].satisfying.count() == 2);

  Rational total(0);
  for (const auto& e : p.dist.entries) total += e.mass;
  CHECK(total == Rational(1));

  ExplicitGame pg = projected_game(p);
  pg.validate();
  CHECK(pg.nq() == 4);

  SUBCASE("answers are padded to h bits") {
    ProjectedBcs wide = projected_bcs(g, 2);
    ExplicitGame wg = projected_game(wide);
    std::uint32_t single0 =
        static_cast<std::uint32_t>(wide.single_of_question[0]);
    CHECK(wg.answers[single0] == std::vector<std::string>{"00", "01"});
  }
}

TEST_CASE("projection preconditions") {
  SUBCASE("answer sets must fit in h bits") {
    ExplicitGame g = ExplicitGame::with_questions({"q"}, {{"a", "b", "c"}});
    g.set_mass(0, 0, Rational(1));
    for (std::uint32_t a = 0; a < 3; ++a) g.accept(0, 0, a, a);
    CHECK_THROWS_AS(projected_bcs(g, 1), CapacityError);
    CHECK_NOTHROW(projected_bcs(g, 2));
  }
  SUBCASE("diagonal decider must reject unequal answers") {
    ExplicitGame g = agreement_game();
    g.accept(0, 0, 0, 1);
    CHECK_THROWS_AS(projected_bcs(g, 1), DomainError);
  }
  SUBCASE("winners must be diagonally consistent") {
    ExplicitGame g = ExplicitGame::with_questions({"q0", "q1"},
                                                  {{"0", "1"}, {"0", "1"}});
    g.set_mass(0, 1, Rational(1, 2));
    g.set_mass(1, 0, Rational(1, 2));
    g.accept(0, 0, 0, 0);
    g.accept(1, 1, 0, 0);
    g.accept(0, 1, 1, 0);
    CHECK_THROWS_AS(projected_bcs(g, 1), DomainError);
  }
}

TEST_CASE("constraint-variable game of a single forced equation") {
  Lcs l = make_lcs(VarSet({"x"}), {{{"x"}, +1}});
  ExplicitGame g = lcs_game(l, {Rational(1)});
  CHECK(g.nq() == 2);
  CHECK(g.answers[0] == std::vector<std::string>{"0"});
  CHECK(g.accepted.size() == 1);
  CHECK(g.accepts(0, 1, 0, 0));
  CHECK(g.mass(0, 1) == Rational(1));
}

TEST_CASE("vacuous equations are representable but carry no mass") {
  Lcs l = make_lcs(VarSet({"x"}), {{{}, +1}, {{"x"}, -1}});
  CHECK(l.bcs.constraints[0].satisfying.count() == 1);
  CHECK_NOTHROW(lcs_game(l, {Rational(0), Rational(1)}));
  CHECK_THROWS_AS(lcs_game(l, {Rational(1, 2), Rational(1, 2)}), DomainError);
}

TEST_CASE("parity validation of linear systems") {
  Lcs l = make_lcs(VarSet({"x", "y"}), {{{"x", "y"}, +1}});
  CHECK_NOTHROW(l.validate());
  CHECK(l.bcs.constraints[0].satisfying.count() == 2);
  l.bcs.constraints[0].satisfying.set(1);
  CHECK_THROWS_AS(l.validate(), DomainError);
}

TEST_CASE("bias formula agrees with the winning probability") {
  Lcs l = make_lcs(VarSet({"x", "y", "z"}),
                   {{{"x", "y"}, +1}, {{"y", "z"}, -1}, {{"x", "z"}, +1}});
  std::vector<Rational> pi(3, Rational(1, 3));

  SUBCASE("deterministic assignment strategy") {
    // x=+1, y=+1, z=-1; the unsatisfiable equation is answered with (+1,+1).
    SyncStrategy s;
    s.dim = 1;
    auto det = [](std::uint32_t pick, int outcomes) {
      std::vector<CMatrix> elems;
      for (int i = 0; i < outcomes; ++i) {
        elems.push_back(CMatrix::Constant(
            1, 1, i == static_cast<int>(pick) ? 1.0 : 0.0));
      }
      return PVM{elems};
    };
    s.pvms.emplace("e0", det(0, 2));  // (+1,+1)
    s.pvms.emplace("e1", det(0, 2));  // (+1,-1)
    s.pvms.emplace("e2", det(0, 2));  // (+1,+1)
    s.pvms.emplace("x", det(0, 2));
    s.pvms.emplace("y", det(0, 2));
    s.pvms.emplace("z", det(1, 2));
    BiasPair bp = lcs_bias(l, pi, s);
    CHECK(bp.direct == doctest::Approx(2.0 * (5.0 / 6.0) - 1).epsilon(1e-12));
    CHECK(std::abs(bp.direct - bp.formula) < 1e-12);
  }

  SUBCASE("random strategies agree across both evaluation paths") {
    ExplicitGame g = lcs_game(l, pi);
    RngStream rng(404);
    for (int rep = 0; rep < 25; ++rep) {
      int d = (rep % 2 == 0) ? 2 : 4;
      SyncStrategy s = random_sync_strategy(g, d, rng);
      BiasPair bp = lcs_bias(l, pi, s);
      CHECK(std::abs(bp.direct - bp.formula) < 1e-10);
    }
  }

  SUBCASE("invalid measurement rejected") {
    ExplicitGame g = lcs_game(l, pi);
    RngStream rng(405);
    SyncStrategy s = random_sync_strategy(g, 2, rng);
    s.pvms.at("x").elems[0] *= 0.5;
    CHECK_THROWS_AS(lcs_bias(l, pi, s), DomainError);
  }
}

TEST_CASE("winning probability of a perfect strategy on the agreement game") {
  ExplicitGame g = agreement_game();
  SyncStrategy s;
  s.dim = 2;
  PVM z{{(CMatrix(2, 2) << 1, 0, 0, 0).finished(),
         (CMatrix(2, 2) << 0, 0, 0, 1).finished()}};
  s.pvms.emplace("q0", z);
  s.pvms.emplace("q1", z);
  CHECK(winning_probability(g, s) == doctest::Approx(1.0).epsilon(1e-12));

  GeneralStrategy gs;
  gs.dim_a = 2;
  gs.dim_b = 2;
  gs.state = GeneralStrategy::mes_state(2);
  for (const auto& [label, pvm] : s.pvms) {
    gs.povms_a[label] = pvm.elems;
    std::vector<CMatrix> transposed;
    for (const auto& e : pvm.elems) transposed.push_back(e.transpose());
    gs.povms_b[label] = transposed;
  }
  CHECK(winning_probability(g, gs) == doctest::Approx(1.0).epsilon(1e-10));
}
