#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <set>
#include <string>

#include "lct/fixtures.hpp"
#include "lct/longcode.hpp"
#include "lct/transforms.hpp"
#include "lct/value.hpp"

using namespace lct;

namespace {

struct Pipeline {
  TestParams params;
  SyncStrategy base;
  ProjectedBcs proj;
};

Pipeline pipeline(const std::string& name, int h, Rational eps, int u = 1) {
  Fixture fx = fixture(name);
  ProjectedBcs proj = projected_bcs(fx.game, h);
  TestParams p{NoiseSpec(eps)};
  p.u = u;
  p.bcs = proj.bcs;
  p.dist = proj.dist;
  SyncStrategy base = projected_strategy(*fx.perfect, fx.game, proj);
  return {std::move(p), std::move(base), std::move(proj)};
}

Pipeline toy(Rational eps, int u = 1) {
  return pipeline("toy_parity", 1, eps, u);
}

}  // namespace

TEST_CASE("parameters are validated") {
  Pipeline t = toy(Rational(1, 10));
  CHECK_NOTHROW(t.params.validate());
  CHECK(support_matrix(t.params.bcs, t.params.dist) ==
        pair_dist_matrix(t.proj));

  SUBCASE("round count must be positive") {
    t.params.u = 0;
    CHECK_THROWS_AS(t.params.validate(), DomainError);
  }
  SUBCASE("joint contexts are capped") {
    t.params.u = 9;  // 9 rounds of 2 variables exceed the 16-variable cube
    CHECK_THROWS_AS(t.params.validate(), CapacityError);
  }
}

TEST_CASE("contexts carry round-prefixed names and the product constraint") {
  Pipeline t = toy(Rational(1, 8), 2);
  TestContext ctx = make_context(t.params, {0, 2});
  CHECK(ctx.w.size() == 4);
  CHECK(ctx.u.size() == 2);
  CHECK(ctx.u.subset_of(ctx.w));
  for (const auto& n : ctx.w.names()) {
    CHECK((n.substr(0, 3) == "r0:" || n.substr(0, 3) == "r1:"));
  }
  CHECK(ctx.rounds.size() == 2);
  // Two satisfying points per pair constraint, so four in the product.
  CHECK(ctx.c.support().count() == 4);

  CHECK_THROWS_AS(make_context(t.params, {0}), DomainError);
}

TEST_CASE("sampled rounds are well formed and deterministic") {
  Pipeline t = toy(Rational(1, 8));
  t.params.record_mu = true;
  RngStream rng(3);
  std::array<int, 3> slots{};
  for (int n = 0; n < 300; ++n) {
    auto [aq, bq] = sample_round(t.params, rng);
    REQUIRE(aq.u.subset_of(aq.w));
    REQUIRE(aq.mu.has_value());
    CHECK(aq.gprime == lifted(aq.f, aq.w).times(aq.g).times(*aq.mu));
    CHECK_FALSE(aq.c.support().empty());
    auto queries = induced_queries(aq, t.params.policy);
    int k = static_cast<int>(bq.slot);
    CHECK(bq.domain == queries[k].domain);
    CHECK(bq.fun == queries[k].fun);
    ++slots[k];
  }
  for (int count : slots) CHECK(count > 60);

  SUBCASE("equal seeds give equal rounds") {
    RngStream r1(42);
    RngStream r2(42);
    auto s1 = sample_round(t.params, r1);
    auto s2 = sample_round(t.params, r2);
    CHECK(alice_payload(s1.first) == alice_payload(s2.first));
    CHECK(bob_payload(s1.second) == bob_payload(s2.second));
  }

  SUBCASE("zero noise leaves the product of the first two draws") {
    Pipeline quiet = toy(Rational(0));
    RngStream r(5);
    for (int n = 0; n < 20; ++n) {
      auto [aq, bq] = sample_round(quiet.params, r);
      CHECK(aq.gprime == lifted(aq.f, aq.w).times(aq.g));
    }
  }
}

TEST_CASE("the decider checks parity and consistency") {
  Pipeline t = toy(Rational(1, 8));
  RngStream rng(9);
  auto [aq, bq] = sample_round(t.params, rng);
  auto queries = induced_queries(aq, t.params.policy);
  int rhs = answer_parity_rhs(aq, t.params.policy);

  for (int k = 0; k < 3; ++k) {
    std::array<int, 3> a{rhs, 1, 1};
    RoundVerdict v = decide(aq, queries[k], a, a[k]);
    CHECK(v.rhs == rhs);
    CHECK(v.linear_ok);
    CHECK(v.consistency_ok);
    CHECK(v.accept());

    CHECK_FALSE(decide(aq, queries[k], a, -a[k]).consistency_ok);
    std::array<int, 3> odd{rhs, -1, 1};
    CHECK_FALSE(decide(aq, queries[k], odd, odd[k]).linear_ok);
  }

  SUBCASE("foreign queries are rejected") {
    BobQuestion wrong = queries[1];
    wrong.fun = wrong.fun.negated();
    CHECK_THROWS_AS(decide(aq, wrong, {1, 1, 1}, 1), DomainError);
    CHECK_THROWS_AS(decide(aq, queries[0], {1, 1, 0}, 1), DomainError);
  }

  SUBCASE("negating the restricted draw flips the parity side") {
    AliceQuestion neg = aq;
    neg.f = neg.f.negated();
    CHECK(answer_parity_rhs(neg, t.params.policy) == -rhs);
    auto neg_queries = induced_queries(neg, t.params.policy);
    // The section of f is unchanged, so the first query is too.
    CHECK(neg_queries[0].fun == queries[0].fun);
    for (int k = 0; k < 3; ++k) {
      std::array<int, 3> a{rhs, 1, 1};
      std::array<int, 3> flipped{-rhs, 1, 1};
      int b = a[k];
      int fb = k == 0 ? -b : b;
      CHECK(decide(neg, neg_queries[k], flipped, fb).accept() ==
            decide(aq, queries[k], a, b).accept());
    }
  }
}

TEST_CASE("payloads round trip") {
  Pipeline t = toy(Rational(1, 8), 2);
  t.params.record_mu = true;
  RngStream rng(11);
  auto [aq, bq] = sample_round(t.params, rng);

  AliceQuestion aback = alice_question_from_payload(alice_payload(aq));
  CHECK(aback.w == aq.w);
  CHECK(aback.u == aq.u);
  CHECK(aback.c == aq.c);
  CHECK(aback.f == aq.f);
  CHECK(aback.g == aq.g);
  CHECK(aback.gprime == aq.gprime);
  CHECK(aback.rounds == aq.rounds);
  CHECK(*aback.mu == *aq.mu);
  CHECK(alice_payload(aback) == alice_payload(aq));

  BobQuestion bback = bob_question_from_payload(bob_payload(bq));
  CHECK(bback.slot == bq.slot);
  CHECK(bback.domain == bq.domain);
  CHECK(bback.fun == bq.fun);
  CHECK(bob_payload(bback) == bob_payload(bq));
}

TEST_CASE("uniform random answers accept at one quarter") {
  Pipeline t = toy(Rational(1, 8));
  ImplicitGame game = as_implicit_game(t.params);
  CHECK(game.answer_arity_a == 3);
  CHECK(game.answer_arity_b == 1);
  ValueEstimate est =
      monte_carlo_value(game, uniform_bits_strategy(game), 40000, 21);
  CHECK(std::abs(est.point - 0.25) <= est.radius);
}

TEST_CASE("the linear view emits three-variable equations") {
  Pipeline t = toy(Rational(1, 8));
  LinearView view = as_lcs_view(t.params);
  RngStream rng(12);
  std::set<std::string> ids;
  for (int n = 0; n < 60; ++n) {
    LinearViewEquation eq = view.sample_equation(rng);
    CHECK((eq.rhs == 1 || eq.rhs == -1));
    for (const auto& v : eq.vars) {
      CHECK(v.substr(0, 2) == "z:");
      ids.insert(v);
    }
    bool repeated = eq.vars[0] == eq.vars[1] || eq.vars[0] == eq.vars[2] ||
                    eq.vars[1] == eq.vars[2];
    CHECK(eq.degenerate == repeated);
  }
  // Many distinct sections appear, but canonical naming merges repeats.
  CHECK(ids.size() > 6);
  CHECK(ids.size() < 180);
}

TEST_CASE("honest play passes the toy test except for the noise, exactly") {
  Pipeline t = toy(Rational(1, 10));
  CompletenessStrategy honest(t.params, t.base);
  TestObservables obs = honest.observables();
  CHECK(obs.dim == 1);

  ExactTestReport rep = exact_test_report(t.params, obs);
  REQUIRE(rep.value_exact.has_value());
  REQUIRE(rep.linear_value_exact.has_value());
  CHECK(*rep.value_exact == Rational(9, 10));
  CHECK(*rep.linear_value_exact == Rational(9, 10));
  CHECK(rep.value == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(rep.linear_value == doctest::Approx(0.9).epsilon(1e-12));
  // One noisy point flips the product, so the bias shrinks by 1 - 2 eps.
  CHECK(rep.triple_trace == doctest::Approx(0.8).epsilon(1e-12));

  SUBCASE("monte carlo agrees with the joint responder") {
    ValueEstimate est = monte_carlo_value(as_implicit_game(t.params),
                                          honest.implicit(), 20000, 5);
    CHECK(std::abs(est.point - 0.9) <= est.radius);
  }

  SUBCASE("imperfect base strategies are rejected") {
    SyncStrategy bad = t.base;
    std::string label = "c" + std::to_string(t.proj.single_of_question[0]);
    std::swap(bad.pvms.at(label).elems[0], bad.pvms.at(label).elems[1]);
    CHECK_THROWS_AS(CompletenessStrategy(t.params, bad), DomainError);
  }
}

TEST_CASE("two-round honest play still fails only on the noise") {
  Pipeline t = toy(Rational(1, 10), 2);
  CompletenessStrategy honest(t.params, t.base);
  ValueEstimate est = monte_carlo_value(as_implicit_game(t.params),
                                        honest.implicit(), 20000, 13);
  CHECK(std::abs(est.point - 0.9) <= est.radius);
}

TEST_CASE("magic square honest play accepts at one minus the noise rate") {
  Pipeline t = pipeline("magic_square", 2, Rational(1, 10));
  CompletenessStrategy honest(t.params, t.base);
  ValueEstimate est = monte_carlo_value(as_implicit_game(t.params),
                                        honest.implicit(), 4000, 7);
  CHECK(std::abs(est.point - 0.9) <= est.radius);

  SUBCASE("exact evaluation rejects wide joint contexts") {
    TestObservables obs = random_test_observables(t.params, 2, 1);
    CHECK_THROWS_AS(exact_test_report(t.params, obs), CapacityError);
  }
}

TEST_CASE("spectra are complete and reproduce the enumerated bias") {
  Pipeline t = toy(Rational(1, 100));
  CompletenessStrategy honest(t.params, t.base);
  TestObservables obs = honest.observables();
  auto tuples = support_tuples(t.params);
  CHECK(tuples.size() == 4);

  double fourier = 0;
  for (const auto& tuple : tuples) {
    TripleSpectra sp = bob_spectra(t.params, obs, tuple.entries);
    CMatrix su = CMatrix::Zero(sp.dim, sp.dim);
    for (const auto& [alpha, coeff] : sp.u_spec) su += coeff * coeff;
    CHECK(max_abs(su - CMatrix::Identity(sp.dim, sp.dim)) < 1e-10);
    CMatrix sw = CMatrix::Zero(sp.dim, sp.dim);
    for (const auto& [beta, coeff] : sp.w_spec) sw += coeff * coeff;
    CHECK(max_abs(sw - CMatrix::Identity(sp.dim, sp.dim)) < 1e-10);
    fourier += tuple.mass.to_double() *
               exact_bias_fourier(sp, t.params.epsilon.eps);
  }
  ExactTestReport rep = exact_test_report(t.params, obs);
  CHECK(fourier == doctest::Approx(rep.triple_trace).epsilon(1e-10));
  CHECK(fourier == doctest::Approx(0.98).epsilon(1e-12));

  SUBCASE("the identity holds for structureless observables too") {
    TestObservables rnd = random_test_observables(t.params, 4, 17);
    double rnd_fourier = 0;
    for (const auto& tuple : tuples) {
      rnd_fourier +=
          tuple.mass.to_double() *
          exact_bias_fourier(bob_spectra(t.params, rnd, tuple.entries),
                             t.params.epsilon.eps);
    }
    ExactTestReport rnd_rep = exact_test_report(t.params, rnd);
    CHECK(rnd_fourier == doctest::Approx(rnd_rep.triple_trace).epsilon(1e-8));
  }
}

TEST_CASE("zero noise drives the fourier form to one for honest play") {
  Pipeline t = toy(Rational(0));
  CompletenessStrategy honest(t.params, t.base);
  TestObservables obs = honest.observables();
  double fourier = 0;
  for (const auto& tuple : support_tuples(t.params)) {
    fourier += tuple.mass.to_double() *
               exact_bias_fourier(bob_spectra(t.params, obs, tuple.entries),
                                  t.params.epsilon.eps);
  }
  CHECK(fourier == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("extraction rebuilds a perfect strategy from honest spectra") {
  Pipeline t = toy(Rational(1, 100));
  CompletenessStrategy honest(t.params, t.base);
  TestObservables obs = honest.observables();
  std::vector<TripleSpectra> spectra;
  for (const auto& tuple : support_tuples(t.params)) {
    spectra.push_back(bob_spectra(t.params, obs, tuple.entries));
  }
  ParallelExtraction ex = extract_parallel_strategy(t.params, spectra);
  CHECK(ex.strategy.validity_residual() < 1e-8);
  CHECK(ex.consistent_value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ex.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ex.value >= ex.consistent_value - 1e-9);

  SUBCASE("every support tuple needs a spectrum") {
    spectra.pop_back();
    CHECK_THROWS_AS(extract_parallel_strategy(t.params, spectra), DomainError);
  }
}

TEST_CASE("magic square extraction also recovers a perfect strategy") {
  Pipeline t = pipeline("magic_square", 2, Rational(1, 100));
  CompletenessStrategy honest(t.params, t.base);
  TestObservables obs = honest.observables();
  std::vector<TripleSpectra> spectra;
  for (const auto& tuple : support_tuples(t.params)) {
    spectra.push_back(bob_spectra(t.params, obs, tuple.entries));
  }
  ParallelExtraction ex = extract_parallel_strategy(t.params, spectra);
  CHECK(ex.strategy.validity_residual() < 1e-8);
  CHECK(ex.consistent_value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ex.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("the audit certifies an honest run") {
  Pipeline t = toy(Rational(1, 100));
  CompletenessStrategy honest(t.params, t.base);
  AuditReport rep = soundness_audit(t.params, honest.observables());

  CHECK(rep.epsilon == doctest::Approx(0.01));
  CHECK(rep.delta == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));
  CHECK(rep.value_threshold == doctest::Approx(71.0 / 72.0).epsilon(1e-12));
  CHECK(rep.extraction_bound ==
        doctest::Approx(0.04 * rep.delta * rep.delta).epsilon(1e-12));
  CHECK(rep.test_value == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(rep.linear_value == doctest::Approx(0.99).epsilon(1e-12));
  CHECK(rep.triple_trace == doctest::Approx(0.98).epsilon(1e-12));
  CHECK(rep.fourier_form == doctest::Approx(0.98).epsilon(1e-10));
  CHECK(rep.extracted_value == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(rep.entries.size() == 6);
  for (const auto& e : rep.entries) {
    CHECK(e.pass);
    CHECK(e.margin == doctest::Approx(e.rhs - e.lhs));
  }
  CHECK(rep.all_pass);
}

TEST_CASE("the audit flags structureless observables") {
  Pipeline t = toy(Rational(1, 100));
  AuditReport rep = soundness_audit(t.params, random_test_observables(t.params, 4, 17));
  CHECK(rep.entries.size() == 6);
  CHECK(rep.test_value < rep.value_threshold);
  CHECK_FALSE(rep.all_pass);
  // The two computations of the collapsed form must still agree.
  CHECK(std::abs(rep.fourier_form - rep.triple_trace) < 1e-8);
}
