#include "lct/suites.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lct/errors.hpp"
#include "lct/fixtures.hpp"
#include "lct/longcode.hpp"
#include "lct/obsfourier.hpp"
#include "lct/transforms.hpp"
#include "lct/value.hpp"

namespace lct {
namespace {

VarSet suite_domain(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("u" + std::to_string(i));
  return VarSet(names);
}

BoolFun random_constraint(const VarSet& d, RngStream& rng) {
  for (;;) {
    BoolFun c(d);
    for (std::uint32_t p = 0; p < c.npoints(); ++p) {
      if (rng.uniform_bit()) c.set_value(p, -1);
    }
    if (c.table().count() > 0) return c;
  }
}

SuiteCheck at_most(std::string name, double observed, double bound,
                   std::string detail) {
  return {std::move(name), observed <= bound, observed, bound,
          std::move(detail)};
}

SuiteCheck at_least(std::string name, double observed, double bound,
                    std::string detail) {
  return {std::move(name), observed >= bound, observed, bound,
          std::move(detail)};
}

SuiteReport make_report(std::string suite, std::uint64_t seed) {
  SuiteReport r;
  r.suite = std::move(suite);
  r.seed = seed;
  return r;
}

struct Pipeline {
  TestParams params;
  SyncStrategy base;
};

Pipeline pipeline(const std::string& name, int h, Rational eps, int u) {
  Fixture fx = fixture(name);
  ProjectedBcs proj = projected_bcs(fx.game, h);
  TestParams p{NoiseSpec(eps),
               u,
               proj.bcs,
               proj.dist,
               SectionPolicy::kLexMinTable,
               0,
               false};
  SyncStrategy base = projected_strategy(*fx.perfect, fx.game, proj);
  return {std::move(p), std::move(base)};
}

std::vector<std::string> split_label(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

SuiteReport fourier_inversion_suite(std::uint64_t seed) {
  SuiteReport r = make_report("fourier-inversion", seed);
  RngStream rng(seed);
  double worst_inv = 0;
  double worst_par = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int nvars = 1 + rep % 2;
    int dim = rep % 4 < 2 ? 2 : 4;
    ObsFamily fam = ObsFamily::random(suite_domain(nvars), dim, rng);
    ObsSpectrum spec = fourier_transform(fam);
    ObsFamily back = inverse_transform(spec);
    for (std::size_t i = 0; i < fam.obs.size(); ++i) {
      worst_inv = std::max(worst_inv, max_abs(fam.obs[i] - back.obs[i]));
    }
    worst_par = std::max(worst_par, parseval_residual(spec));
  }
  r.checks.push_back(at_most(
      "inversion-round-trip", worst_inv, 1e-10,
      "worst reconstruction residual over 100 random observable families"));
  r.checks.push_back(at_most(
      "parseval-residual", worst_par, 1e-10,
      "worst squared-coefficient completeness residual over the same runs"));
  return r;
}

SuiteReport folding_suite(std::uint64_t seed) {
  SuiteReport r = make_report("folding", seed);
  RngStream rng(seed);
  double worst_even = 0;
  double worst_anti = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int nvars = 1 + rep % 2;
    int dim = rep % 4 < 2 ? 2 : 4;
    VarSet d = suite_domain(nvars);
    ObsFamily folded = fold_true(ObsFamily::random(d, dim, rng));
    for (std::uint32_t f = 0; f < folded.obs.size(); ++f) {
      BoolFun fn = fun_from_index(d, f);
      worst_anti = std::max(
          worst_anti, max_abs(folded.at(fn) + folded.at(fn.negated())));
    }
    ObsSpectrum spec = fourier_transform(folded);
    for (std::uint32_t a = 0; a < spec.coeff.size(); ++a) {
      if (std::popcount(a) % 2 == 0) {
        worst_even = std::max(worst_even, max_abs(spec.coeff[a]));
      }
    }
  }
  r.checks.push_back(
      at_most("even-coefficients-vanish", worst_even, 1e-10,
              "worst even-size coefficient over 100 folded families"));
  r.checks.push_back(
      at_most("negation-antisymmetry", worst_anti, 1e-12,
              "worst |A(f) + A(-f)| entry over all members"));
  return r;
}

SuiteReport conditioning_suite(std::uint64_t seed) {
  SuiteReport r = make_report("conditioning", seed);
  RngStream rng(seed);
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int nvars = 1 + rep % 2;
    int dim = rep % 4 < 2 ? 2 : 4;
    VarSet d = suite_domain(nvars);
    ObsFamily fam = ObsFamily::random(d, dim, rng);
    BoolFun c = random_constraint(d, rng);
    ObsSpectrum spec = fourier_transform(condition(fam, c));
    for (std::uint32_t a = 0; a < spec.coeff.size(); ++a) {
      CubeSubset alpha = subset_from_index(d, a);
      bool inside = true;
      for (std::uint32_t p = 0; p < alpha.npoints(); ++p) {
        if (alpha.test(p) && c.value(p) == +1) inside = false;
      }
      if (!inside) worst = std::max(worst, max_abs(spec.coeff[a]));
    }
  }
  r.checks.push_back(at_most(
      "off-support-coefficients-vanish", worst, 1e-10,
      "worst coefficient at subsets leaving the constraint support, over "
      "100 random family and constraint pairs"));
  return r;
}

SuiteReport trace_gap_suite(std::uint64_t seed) {
  SuiteReport r = make_report("trace-gap", seed);
  RngStream rng(seed);
  double worst_excess = std::numeric_limits<double>::lowest();
  for (int rep = 0; rep < 1000; ++rep) {
    std::array<CMatrix, 3> y;
    std::array<CMatrix, 3> x;
    for (int l = 0; l < 3; ++l) {
      y[l] = random_binary_observable(4, rng);
      x[l] = random_binary_observable(4, rng);
    }
    TraceGap g = triple_trace_gap(y, x);
    worst_excess = std::max(worst_excess, g.lhs - g.rhs);
  }
  r.checks.push_back(
      at_most("difference-bounded-by-cauchy-schwarz", worst_excess, 1e-9,
              "max of lhs - rhs over 1000 random dimension-4 sextuples"));

  std::array<CMatrix, 3> same;
  for (int l = 0; l < 3; ++l) same[l] = random_binary_observable(4, rng);
  TraceGap eq = triple_trace_gap(same, same);
  r.checks.push_back({"identical-triples-zero-gap",
                      eq.lhs == 0.0 && eq.rhs <= 1e-6, eq.rhs, 1e-6,
                      "lhs is exactly zero; rhs vanishes up to the "
                      "involution residual of the sampled observables"});
  return r;
}

SuiteReport lcs_bias_suite(std::uint64_t seed) {
  SuiteReport r = make_report("lcs-bias", seed);
  VarSet vars({"x0", "x1", "x2"});
  Lcs l = make_lcs(vars, {{{"x0", "x1"}, -1},
                          {{"x1", "x2"}, -1},
                          {{"x0", "x2"}, -1}});
  std::vector<Rational> pi(3, Rational(1, 3));
  ExplicitGame g = lcs_game(l, pi);
  RngStream rng(seed);
  double worst = 0;
  for (int rep = 0; rep < 100; ++rep) {
    int d = 2 + rep % 3;
    SyncStrategy s = random_sync_strategy(g, d, rng);
    BiasPair bp = lcs_bias(l, pi, s);
    worst = std::max(worst, std::abs(bp.direct - bp.formula));
  }
  r.checks.push_back(at_most(
      "direct-matches-formula", worst, 1e-10,
      "frustrated three-equation triangle, 100 random synchronous "
      "strategies of dimensions 2 to 4"));
  return r;
}

SuiteReport classical_values_suite(std::uint64_t seed) {
  SuiteReport r = make_report("classical-values", seed);
  Rational chsh = classical_value_exact(fixture("chsh").game);
  Rational chsh2 = classical_value_exact(repeat(fixture("chsh").game, 2));
  Rational ms = classical_value_exact(fixture("magic_square").game);
  r.checks.push_back({"chsh-three-quarters", chsh == Rational(3, 4),
                      chsh.to_double(), 0.75,
                      "exact enumeration, value " + chsh.to_string()});
  r.checks.push_back({"chsh-squared-five-eighths", chsh2 == Rational(5, 8),
                      chsh2.to_double(), 0.625,
                      "exact enumeration, value " + chsh2.to_string()});
  r.checks.push_back({"magic-square-seventeen-eighteenths",
                      ms == Rational(17, 18), ms.to_double(),
                      Rational(17, 18).to_double(),
                      "exact enumeration, value " + ms.to_string()});
  return r;
}

SuiteReport perfect_chain_suite(std::uint64_t seed) {
  SuiteReport r = make_report("perfect-chain", seed);
  Fixture ms = fixture("magic_square");
  const SyncStrategy& q = *ms.perfect;

  double v = winning_probability(ms.game, q);
  r.checks.push_back(at_most("magic-square-perfect-value", std::abs(1.0 - v),
                             1e-9, "two-qubit Pauli strategy"));

  double worst_comm = 0;
  for (auto [x, y] : ms.game.supported_pairs()) {
    worst_comm = std::max(
        worst_comm, commutation_residual(q.pvm(ms.game.questions[x]).elems,
                                         q.pvm(ms.game.questions[y]).elems));
  }
  r.checks.push_back(at_most(
      "supported-pairs-commute", worst_comm, 1e-8,
      "worst commutator entry over all positive-mass question pairs"));

  ProjectedBcs proj = projected_bcs(ms.game, 2);
  SyncStrategy lifted = projected_strategy(q, ms.game, proj);
  double vp =
      winning_probability(bcs_game(proj.bcs, pair_dist_matrix(proj)), lifted);
  r.checks.push_back(at_most("lifted-projection-perfect-value",
                             std::abs(1.0 - vp), 1e-8,
                             "joint measurements on the projected system"));

  bool same = ensure_nonempty_answers(ms.game) == ms.game;
  r.checks.push_back({"nonempty-repair-is-identity", same, same ? 1.0 : 0.0,
                      1.0,
                      "games whose pairs all admit winning answers are "
                      "returned unchanged"});
  return r;
}

SuiteReport completeness_suite(std::uint64_t seed) {
  SuiteReport r = make_report("completeness", seed);

  Pipeline toy = pipeline("toy_parity", 1, Rational(1, 10), 1);
  CompletenessStrategy honest(toy.params, toy.base);
  ExactTestReport rep = exact_test_report(toy.params, honest.observables());
  r.checks.push_back(at_least("exact-value-at-least-one-minus-epsilon",
                              rep.value, 0.9 - 1e-12,
                              "full enumeration at epsilon 1/10"));
  bool exact_eq = rep.value_exact && *rep.value_exact == Rational(9, 10);
  r.checks.push_back({"exact-value-equals-one-minus-epsilon", exact_eq,
                      rep.value, 0.9,
                      "rational enumeration gives 9/10 on the nose"});

  Pipeline ms = pipeline("magic_square", 2, Rational(1, 10), 1);
  CompletenessStrategy honest_ms(ms.params, ms.base);
  ValueEstimate est = monte_carlo_value(as_implicit_game(ms.params),
                                        honest_ms.implicit(), 100000, seed);
  r.checks.push_back(at_least(
      "magic-square-monte-carlo", est.point, 0.9 - est.radius,
      "100000 rounds at epsilon 1/10, bound lowered by the three-sigma "
      "half-width"));

  r.extra["toy_params"] = params_json(toy.params);
  r.extra["magic_square_params"] = params_json(ms.params);
  r.extra["monte_carlo"] = estimate_json(est);
  return r;
}

SuiteReport soundness_suite(std::uint64_t seed) {
  SuiteReport r = make_report("soundness", seed);
  Pipeline toy = pipeline("toy_parity", 1, Rational(1, 100), 1);
  CompletenessStrategy honest(toy.params, toy.base);
  AuditReport a = soundness_audit(toy.params, honest.observables());
  for (const InequalityEntry& e : a.entries) {
    r.checks.push_back(
        {e.name, e.pass, e.lhs, e.rhs, "pass when observed <= bound + 1e-9"});
  }
  r.extra["audit"] = audit_json(a);
  r.extra["params"] = params_json(toy.params);
  return r;
}

SuiteReport extraction_suite(std::uint64_t seed) {
  SuiteReport r = make_report("extraction", seed);
  double worst_povm = 0;
  std::int64_t violations = 0;
  std::int64_t answers_checked = 0;
  for (int u : {1, 2}) {
    Pipeline toy = pipeline("toy_parity", 1, Rational(1, 100), u);
    CompletenessStrategy honest(toy.params, toy.base);
    TestObservables obs = honest.observables();
    std::vector<TripleSpectra> spectra;
    for (const SupportTuple& tup : support_tuples(toy.params)) {
      spectra.push_back(bob_spectra(toy.params, obs, tup.entries));
    }
    ParallelExtraction ex = extract_parallel_strategy(toy.params, spectra);

    auto completeness = [&worst_povm](
                            const std::map<std::string,
                                           std::vector<CMatrix>>& povms,
                            int dim) {
      CMatrix eye = CMatrix::Identity(dim, dim);
      for (const auto& [label, elems] : povms) {
        CMatrix sum = CMatrix::Zero(dim, dim);
        for (const CMatrix& m : elems) sum += m;
        worst_povm = std::max(worst_povm, max_abs(sum - eye));
      }
    };
    completeness(ex.strategy.povms_a, ex.strategy.dim_a);
    completeness(ex.strategy.povms_b, ex.strategy.dim_b);

    for (const auto& [label, elems] : ex.strategy.povms_a) {
      std::uint32_t qi = ex.game.question_index(label);
      std::vector<std::size_t> ks;
      for (const std::string& cl : split_label(label, '|')) {
        ks.push_back(std::stoul(cl.substr(1)));
      }
      for (std::size_t a = 0; a < elems.size(); ++a) {
        if (max_abs(elems[a]) <= 1e-12) continue;
        ++answers_checked;
        std::vector<std::string> blocks =
            split_label(ex.game.answers[qi][a], '|');
        if (blocks.size() != ks.size()) {
          ++violations;
          continue;
        }
        for (std::size_t l = 0; l < ks.size(); ++l) {
          const Constraint& c = toy.params.bcs.constraints.at(ks[l]);
          std::uint32_t pt =
              assignment_from_label(c.context.size(), blocks[l]);
          if (!c.satisfying.test(pt)) ++violations;
        }
      }
    }
  }
  r.checks.push_back(at_most(
      "povm-completeness", worst_povm, 1e-8,
      "worst |sum - identity| entry over both players, one and two rounds"));
  r.checks.push_back(
      {"answers-satisfy-constraints", violations == 0 && answers_checked > 0,
       static_cast<double>(violations), 0.0,
       "decoded every one of " + std::to_string(answers_checked) +
           " positive-weight answers against its round constraints"});
  return r;
}

SuiteReport random_answers_suite(std::uint64_t seed) {
  SuiteReport r = make_report("random-answers", seed);
  Pipeline toy = pipeline("toy_parity", 1, Rational(1, 100), 1);
  ImplicitGame game = as_implicit_game(toy.params);
  ValueEstimate est =
      monte_carlo_value(game, uniform_bits_strategy(game), 100000, seed);
  r.checks.push_back(at_most(
      "uniform-play-accepts-one-quarter", std::abs(est.point - 0.25),
      est.radius,
      "parity and consistency checks fail independently under fair coins; "
      "bound is the three-sigma half-width over 100000 rounds"));
  r.extra["estimate"] = estimate_json(est);
  return r;
}

SuiteReport determinism_suite(std::uint64_t seed) {
  SuiteReport r = make_report("determinism", seed);
  for (const char* name : {"folding", "lcs-bias", "random-answers"}) {
    std::string once = dump_canonical(suite_json(run_suite(name, seed)));
    std::string twice = dump_canonical(suite_json(run_suite(name, seed)));
    r.checks.push_back({std::string("byte-identical-") + name, once == twice,
                        static_cast<double>(once.size()),
                        static_cast<double>(twice.size()),
                        "canonical dumps of two equally seeded runs"});
  }
  return r;
}

SuiteReport corrupted_audit_suite(std::uint64_t seed) {
  SuiteReport r = make_report("corrupted-audit", seed);
  r.asserting = false;
  Pipeline toy = pipeline("toy_parity", 1, Rational(1, 100), 1);
  TestObservables obs = random_test_observables(toy.params, 4, seed);
  AuditReport a = soundness_audit(toy.params, obs);
  bool flagged = false;
  for (const InequalityEntry& e : a.entries) {
    r.checks.push_back(
        {e.name, e.pass, e.lhs, e.rhs, "informational, audits do not assert"});
    if (!e.pass) flagged = true;
  }
  r.checks.push_back({"flagged-entries-present", flagged, flagged ? 1.0 : 0.0,
                      1.0,
                      "structureless random observables must trip at least "
                      "one inequality"});
  r.pass = flagged;
  r.extra["audit"] = audit_json(a);
  r.extra["params"] = params_json(toy.params);
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"fourier-inversion", "folding",        "conditioning",
          "trace-gap",         "lcs-bias",       "classical-values",
          "perfect-chain",     "completeness",   "soundness",
          "extraction",        "random-answers", "determinism",
          "corrupted-audit"};
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed) {
  SuiteReport r;
  if (name == "fourier-inversion") {
    r = fourier_inversion_suite(seed);
  } else if (name == "folding") {
    r = folding_suite(seed);
  } else if (name == "conditioning") {
    r = conditioning_suite(seed);
  } else if (name == "trace-gap") {
    r = trace_gap_suite(seed);
  } else if (name == "lcs-bias") {
    r = lcs_bias_suite(seed);
  } else if (name == "classical-values") {
    r = classical_values_suite(seed);
  } else if (name == "perfect-chain") {
    r = perfect_chain_suite(seed);
  } else if (name == "completeness") {
    r = completeness_suite(seed);
  } else if (name == "soundness") {
    r = soundness_suite(seed);
  } else if (name == "extraction") {
    r = extraction_suite(seed);
  } else if (name == "random-answers") {
    r = random_answers_suite(seed);
  } else if (name == "determinism") {
    r = determinism_suite(seed);
  } else if (name == "corrupted-audit") {
    r = corrupted_audit_suite(seed);
  } else {
    throw DomainError("unknown suite: " + name);
  }
  if (r.asserting) {
    r.pass = std::all_of(r.checks.begin(), r.checks.end(),
                         [](const SuiteCheck& c) { return c.pass; });
  }
  return r;
}

Payload suite_json(const SuiteReport& r) {
  Payload p;
  p["version"] = kVersion;
  p["suite"] = r.suite;
  p["seed"] = r.seed;
  p["asserting"] = r.asserting;
  p["pass"] = r.pass;
  Payload checks = Payload::array();
  for (const SuiteCheck& c : r.checks) {
    Payload e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["observed"] = c.observed;
    e["bound"] = c.bound;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(e);
  }
  p["checks"] = checks;
  if (!r.extra.empty()) p["extra"] = r.extra;
  return p;
}

}  // namespace lct
