// Python module exposing the main operations over canonical JSON strings:
// every structured argument and result uses the same document schemas as
// the command-line tool, so json.loads on the python side is all it takes.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "lct/errors.hpp"
#include "lct/fixtures.hpp"
#include "lct/longcode.hpp"
#include "lct/serialize.hpp"
#include "lct/suites.hpp"
#include "lct/transforms.hpp"
#include "lct/value.hpp"

namespace py = pybind11;

namespace {

lct::Payload parse(const std::string& text) {
  return lct::Payload::parse(text);
}

lct::ExplicitGame game_arg(const std::string& text) {
  return lct::game_from_json(parse(text));
}

struct Compiled {
  lct::ExplicitGame game;
  lct::ProjectedBcs proj;
  lct::TestParams params;
};

Compiled compile_game(const lct::ExplicitGame& g, const lct::Rational& eps,
                      int u, int h, std::uint64_t seed) {
  if (!lct::is_synchronous(g)) {
    throw lct::DomainError("the input game is not synchronous");
  }
  lct::ExplicitGame repaired = lct::ensure_nonempty_answers(g);
  int bits = h;
  if (bits <= 0) {
    std::size_t widest = 1;
    for (const auto& a : repaired.answers) widest = std::max(widest, a.size());
    bits = 1;
    while ((std::size_t{1} << bits) < widest) ++bits;
  }
  lct::ProjectedBcs proj = lct::projected_bcs(repaired, bits);
  lct::TestParams params{lct::NoiseSpec(eps),
                         u,
                         proj.bcs,
                         proj.dist,
                         lct::SectionPolicy::kLexMinTable,
                         seed,
                         false};
  params.validate();
  return {std::move(repaired), std::move(proj), std::move(params)};
}

Compiled compile_fixture(const std::string& name, const std::string& eps,
                         int u, int h, std::uint64_t seed) {
  return compile_game(lct::fixture(name).game, lct::Rational::parse(eps), u,
                      h, seed);
}

lct::SyncStrategy honest_base(const std::string& name, const Compiled& c) {
  lct::Fixture fx = lct::fixture(name);
  if (!fx.perfect) {
    throw lct::DomainError("fixture " + fx.name + " has no perfect strategy");
  }
  return lct::projected_strategy(*fx.perfect, c.game, c.proj);
}

}  // namespace

PYBIND11_MODULE(lct, m) {
  m.doc() =
      "long-code test compiler for constraint games; structured values are "
      "canonical JSON strings";

  py::register_exception<lct::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<lct::CapacityError>(m, "CapacityError",
                                             PyExc_OverflowError);

  m.def("version", [] { return std::string(lct::kVersion); });

  m.def("fixture_names", [] { return lct::fixture_names(); });

  m.def(
      "fixture_game",
      [](const std::string& name) {
        return lct::dump_canonical(lct::game_json(lct::fixture(name).game));
      },
      py::arg("name"), "explicit game of a named fixture");

  m.def(
      "build_game",
      [](const std::string& doc) {
        lct::Payload p = parse(doc);
        lct::ExplicitGame g;
        if (p.contains("parity")) {
          lct::Lcs l = lct::lcs_from_json(p);
          auto n = static_cast<std::int64_t>(l.bcs.constraints.size());
          g = lct::lcs_game(l, std::vector<lct::Rational>(
                                   n, lct::Rational(1, n)));
        } else {
          lct::Bcs b = lct::bcs_from_json(p);
          auto n = static_cast<std::int64_t>(b.constraints.size());
          g = lct::bcs_game(
              b, lct::PairDist(n, std::vector<lct::Rational>(
                                      n, lct::Rational(1, n * n))));
        }
        return lct::dump_canonical(lct::game_json(g));
      },
      py::arg("doc"),
      "explicit game of a constraint-system document under the uniform "
      "distribution");

  m.def(
      "ensure_nonempty",
      [](const std::string& game) {
        return lct::dump_canonical(
            lct::game_json(lct::ensure_nonempty_answers(game_arg(game))));
      },
      py::arg("game"));

  m.def(
      "project",
      [](const std::string& game) {
        return lct::dump_canonical(
            lct::game_json(lct::project(game_arg(game))));
      },
      py::arg("game"));

  m.def(
      "repeat",
      [](const std::string& game, int u) {
        return lct::dump_canonical(
            lct::game_json(lct::repeat(game_arg(game), u)));
      },
      py::arg("game"), py::arg("u"));

  m.def(
      "classical_value",
      [](const std::string& game) {
        lct::ExplicitGame g = game_arg(game);
        lct::Payload p;
        p["value"] = lct::rational_json(lct::classical_value_exact(g));
        p["estimate"] = lct::estimate_json(lct::classical_value(g));
        return lct::dump_canonical(p);
      },
      py::arg("game"), "exact optimum over deterministic strategies");

  m.def(
      "compile_params",
      [](const std::string& game, const std::string& epsilon, int u, int h,
         std::uint64_t seed) {
        Compiled c =
            compile_game(game_arg(game), lct::Rational::parse(epsilon), u, h,
                         seed);
        return lct::dump_canonical(lct::params_json(c.params));
      },
      py::arg("game"), py::arg("epsilon"), py::arg("u") = 1,
      py::arg("h") = 0, py::arg("seed") = 0,
      "test parameters of the long-code compilation of a synchronous game");

  m.def(
      "sample_payloads",
      [](const std::string& params) {
        lct::TestParams t = lct::params_from_json(parse(params));
        lct::RngStream rng(t.seed);
        auto [aq, bq] = lct::sample_round(t, rng);
        return std::make_pair(lct::dump_canonical(lct::alice_payload(aq)),
                              lct::dump_canonical(lct::bob_payload(bq)));
      },
      py::arg("params"),
      "question payloads of the first round at the recorded seed");

  m.def(
      "test_value_montecarlo",
      [](const std::string& fixture, const std::string& epsilon, int u, int h,
         std::uint64_t samples, bool uniform, std::uint64_t seed) {
        Compiled c = compile_fixture(fixture, epsilon, u, h, seed);
        lct::ImplicitGame game = lct::as_implicit_game(c.params);
        lct::ImplicitStrategy strat =
            uniform ? lct::uniform_bits_strategy(game)
                    : lct::CompletenessStrategy(c.params,
                                                honest_base(fixture, c))
                          .implicit();
        return lct::dump_canonical(lct::estimate_json(
            lct::monte_carlo_value(game, strat, samples, seed)));
      },
      py::arg("fixture"), py::arg("epsilon"), py::arg("u") = 1,
      py::arg("h") = 0, py::arg("samples") = 20000,
      py::arg("uniform") = false, py::arg("seed") = 0);

  m.def(
      "test_value_exact",
      [](const std::string& fixture, const std::string& epsilon, int u,
         int h) {
        Compiled c = compile_fixture(fixture, epsilon, u, h, 0);
        lct::CompletenessStrategy honest(c.params, honest_base(fixture, c));
        lct::ExactTestReport rep =
            lct::exact_test_report(c.params, honest.observables());
        lct::Payload p;
        p["value"] = rep.value;
        p["linear_value"] = rep.linear_value;
        p["triple_trace"] = rep.triple_trace;
        if (rep.value_exact) {
          p["value_rational"] = lct::rational_json(*rep.value_exact);
        }
        if (rep.linear_value_exact) {
          p["linear_value_rational"] =
              lct::rational_json(*rep.linear_value_exact);
        }
        return lct::dump_canonical(p);
      },
      py::arg("fixture"), py::arg("epsilon"), py::arg("u") = 1,
      py::arg("h") = 0,
      "full enumeration of the honest strategy's acceptance probability");

  m.def(
      "audit",
      [](const std::string& fixture, const std::string& epsilon, int u, int h,
         bool corrupt, int dim, std::uint64_t seed) {
        Compiled c = compile_fixture(fixture, epsilon, u, h, seed);
        lct::TestObservables obs =
            corrupt ? lct::random_test_observables(c.params, dim, seed)
                    : lct::CompletenessStrategy(c.params,
                                                honest_base(fixture, c))
                          .observables();
        return lct::dump_canonical(
            lct::audit_json(lct::soundness_audit(c.params, obs)));
      },
      py::arg("fixture"), py::arg("epsilon"), py::arg("u") = 1,
      py::arg("h") = 0, py::arg("corrupt") = false, py::arg("dim") = 4,
      py::arg("seed") = 0,
      "soundness inequality chain on honest or random observables");

  m.def(
      "seesaw",
      [](const std::string& game, int dim, int iterations,
         std::uint64_t seed) {
        lct::SeesawResult r =
            lct::seesaw_sync(game_arg(game), dim, iterations, seed);
        lct::Payload p;
        p["estimate"] = lct::estimate_json(r.estimate);
        p["strategy"] = lct::strategy_json(r.strategy);
        return lct::dump_canonical(p);
      },
      py::arg("game"), py::arg("dim") = 2, py::arg("iterations") = 200,
      py::arg("seed") = 0, "alternating lower-bound optimization");

  m.def("suite_names", [] { return lct::suite_names(); });

  m.def(
      "run_suite",
      [](const std::string& name, std::uint64_t seed) {
        return lct::dump_canonical(
            lct::suite_json(lct::run_suite(name, seed)));
      },
      py::arg("name"), py::arg("seed") = 0,
      "one named verification suite with per-check pass/fail entries");
}
