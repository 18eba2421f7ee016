// Command-line surface: constraint-system and fixture plumbing, game
// transformation passes, the long-code compilation pipeline, value
// estimation, soundness audits and the verification suites.
//
// Exit codes: 0 success, 1 failed assertion, 2 usage error, 3 capacity
// error.  LCT_SEED sets the default seed; every other input is a flag.
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "lct/errors.hpp"
#include "lct/fixtures.hpp"
#include "lct/longcode.hpp"
#include "lct/serialize.hpp"
#include "lct/suites.hpp"
#include "lct/transforms.hpp"
#include "lct/value.hpp"

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LCT_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

void emit(const lct::Payload& report, const std::string& out) {
  if (out.empty()) {
    std::fputs(lct::dump_canonical(report).c_str(), stdout);
  } else {
    lct::write_json_file(out, report);
    std::fprintf(stderr, "wrote %s\n", out.c_str());
  }
}

lct::ExplicitGame load_game(const std::string& in,
                            const std::string& fixture_name) {
  if (!fixture_name.empty()) return lct::fixture(fixture_name).game;
  if (in.empty()) throw lct::DomainError("pass --in FILE or --fixture NAME");
  return lct::game_from_json(lct::read_json_file(in));
}

int answer_bits_needed(const lct::ExplicitGame& g) {
  std::size_t widest = 1;
  for (const auto& a : g.answers) widest = std::max(widest, a.size());
  int h = 1;
  while ((std::size_t{1} << h) < widest) ++h;
  return h;
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
  int bits = h > 0 ? h : answer_bits_needed(repaired);
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

lct::SyncStrategy honest_base(const lct::Fixture& fx, const Compiled& c) {
  if (!fx.perfect) {
    throw lct::DomainError("fixture " + fx.name +
                           " has no perfect strategy; use --uniform");
  }
  return lct::projected_strategy(*fx.perfect, c.game, c.proj);
}

lct::Payload input_descriptor(const lct::ExplicitGame& g) {
  lct::Payload d;
  d["questions"] = g.nq();
  d["provenance"] = g.provenance;
  return d;
}

lct::Payload report_head(const std::string& command) {
  lct::Payload p;
  p["version"] = lct::kVersion;
  p["command"] = command;
  return p;
}

lct::Payload fixture_report(const std::string& name) {
  lct::Fixture fx = lct::fixture(name);
  lct::Payload p = report_head("fixture");
  p["name"] = fx.name;
  p["answer_bits"] = fx.answer_bits;
  p["game"] = lct::game_json(fx.game);
  if (fx.lcs) p["lcs"] = lct::lcs_json(*fx.lcs);
  if (!fx.equation_dist.empty()) {
    lct::Payload d = lct::Payload::array();
    for (const auto& r : fx.equation_dist) d.push_back(lct::rational_json(r));
    p["equation_dist"] = d;
  }
  if (fx.classical_value_ref) {
    p["classical_value"] = lct::rational_json(*fx.classical_value_ref);
  }
  if (fx.quantum_value_ref) p["quantum_value"] = *fx.quantum_value_ref;
  if (fx.perfect) p["perfect_strategy"] = lct::strategy_json(*fx.perfect);
  if (fx.quantum) p["quantum_strategy"] = lct::strategy_json(*fx.quantum);
  return p;
}

lct::Payload build_game_doc(const std::string& in,
                            const std::string& fixture_name) {
  if (!fixture_name.empty()) {
    return lct::game_json(lct::fixture(fixture_name).game);
  }
  if (in.empty()) throw lct::DomainError("pass --in FILE or --fixture NAME");
  lct::Payload doc = lct::read_json_file(in);
  if (doc.contains("parity")) {
    lct::Lcs l = lct::lcs_from_json(doc);
    auto m = static_cast<std::int64_t>(l.bcs.constraints.size());
    std::vector<lct::Rational> pi(m, lct::Rational(1, m));
    return lct::game_json(lct::lcs_game(l, pi));
  }
  lct::Bcs b = lct::bcs_from_json(doc);
  auto m = static_cast<std::int64_t>(b.constraints.size());
  lct::PairDist pi(m, std::vector<lct::Rational>(m, lct::Rational(1, m * m)));
  return lct::game_json(lct::bcs_game(b, pi));
}

lct::Payload compile_report(const lct::ExplicitGame& g,
                            const lct::Rational& eps, int u, int h,
                            bool paper, std::uint64_t seed) {
  if (paper && !(eps < lct::Rational(1, 72))) {
    throw lct::DomainError("paper mode requires epsilon < 1/72");
  }
  Compiled c = compile_game(g, eps, u, h, seed);
  lct::Payload p = report_head("compile");
  p["input"] = input_descriptor(g);
  p["applied_passes"] =
      lct::Payload::array({"nonempty", "project", "long-code-test"});
  p["h"] = c.proj.h;
  p["paper_mode"] = paper;
  p["delta"] = lct::kDefaultDelta;
  p["s_prime"] = lct::rational_json(lct::Rational(71, 72));
  p["params"] = lct::params_json(c.params);
  p["policy"] = lct::to_string(c.params.policy);

  lct::RngStream rng(seed);
  auto [aq, bq] = lct::sample_round(c.params, rng);
  p["payload_bytes"] = lct::dump_canonical(lct::alice_payload(aq)).size() +
                       lct::dump_canonical(lct::bob_payload(bq)).size();

  lct::RngStream lin_rng(seed);
  lct::LinearViewEquation eq = lct::as_lcs_view(c.params).sample_equation(
      lin_rng);
  lct::Payload view;
  view["vars"] = lct::Payload::array({eq.vars[0], eq.vars[1], eq.vars[2]});
  view["rhs"] = eq.rhs;
  view["degenerate"] = eq.degenerate;
  p["linear_view_sample"] = view;
  return p;
}

lct::Payload classical_report(const lct::ExplicitGame& g) {
  lct::Payload p = report_head("estimate");
  p["method"] = "classical";
  p["input"] = input_descriptor(g);
  p["value"] = lct::rational_json(lct::classical_value_exact(g));
  p["estimate"] = lct::estimate_json(lct::classical_value(g));
  return p;
}

lct::Payload montecarlo_report(const std::string& fixture_name,
                               const lct::Rational& eps, int u, int h,
                               std::uint64_t samples, bool uniform,
                               bool exact, std::uint64_t seed) {
  lct::Fixture fx = lct::fixture(fixture_name);
  Compiled c = compile_game(fx.game, eps, u, h, seed);
  lct::Payload p = report_head("estimate");
  p["method"] = "montecarlo";
  p["fixture"] = fx.name;
  p["params"] = lct::params_json(c.params);
  p["uniform"] = uniform;
  if (exact) {
    lct::CompletenessStrategy honest(c.params, honest_base(fx, c));
    lct::ExactTestReport rep =
        lct::exact_test_report(c.params, honest.observables());
    lct::Payload e;
    e["value"] = rep.value;
    e["linear_value"] = rep.linear_value;
    e["triple_trace"] = rep.triple_trace;
    if (rep.value_exact) {
      e["value_rational"] = lct::rational_json(*rep.value_exact);
    }
    if (rep.linear_value_exact) {
      e["linear_value_rational"] = lct::rational_json(*rep.linear_value_exact);
    }
    p["exact"] = e;
    return p;
  }
  lct::ImplicitGame game = lct::as_implicit_game(c.params);
  lct::ImplicitStrategy strat =
      uniform ? lct::uniform_bits_strategy(game)
              : lct::CompletenessStrategy(c.params, honest_base(fx, c))
                    .implicit();
  p["estimate"] =
      lct::estimate_json(lct::monte_carlo_value(game, strat, samples, seed));
  return p;
}

lct::Payload seesaw_report(const lct::ExplicitGame& g, int dim,
                           int iterations, std::uint64_t seed) {
  lct::SeesawResult r = lct::seesaw_sync(g, dim, iterations, seed);
  lct::Payload p = report_head("estimate");
  p["method"] = "seesaw";
  p["input"] = input_descriptor(g);
  p["dim"] = dim;
  p["iterations"] = iterations;
  p["seed"] = seed;
  p["estimate"] = lct::estimate_json(r.estimate);
  p["strategy"] = lct::strategy_json(r.strategy);
  return p;
}

lct::Payload audit_report_doc(const std::string& fixture_name,
                              const lct::Rational& eps, int u, int h, int dim,
                              bool corrupt, std::uint64_t seed) {
  lct::Fixture fx = lct::fixture(fixture_name);
  Compiled c = compile_game(fx.game, eps, u, h, seed);
  lct::TestObservables obs =
      corrupt ? lct::random_test_observables(c.params, dim, seed)
              : lct::CompletenessStrategy(c.params, honest_base(fx, c))
                    .observables();
  lct::AuditReport a = lct::soundness_audit(c.params, obs);
  lct::Payload p = report_head("audit");
  p["fixture"] = fx.name;
  p["corrupt"] = corrupt;
  if (corrupt) p["dim"] = dim;
  p["params"] = lct::params_json(c.params);
  p["policy"] = lct::to_string(c.params.policy);
  p["audit"] = lct::audit_json(a);
  std::fprintf(stderr, "%s\n",
               a.all_pass ? "all inequalities hold"
                          : "flagged entries present");
  return p;
}

int run_verify(std::vector<std::string> names, const std::string& config,
               std::uint64_t seed, const std::string& out) {
  if (!config.empty()) {
    lct::Payload cfg = lct::read_json_file(config);
    if (!cfg.contains("suites") || !cfg.at("suites").is_array()) {
      throw lct::DomainError("config must carry a \"suites\" array");
    }
    names = cfg.at("suites").get<std::vector<std::string>>();
    if (cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
  }
  auto known = lct::suite_names();
  if (names.empty()) names = known;
  for (const auto& n : names) {
    if (std::find(known.begin(), known.end(), n) == known.end()) {
      throw lct::DomainError("unknown suite: " + n);
    }
  }

  lct::Payload p = report_head("verify");
  p["seed"] = seed;
  lct::Payload suites = lct::Payload::array();
  bool all = true;
  for (const auto& n : names) {
    lct::SuiteReport r = lct::run_suite(n, seed);
    std::fprintf(stderr, "%s %s\n",
                 !r.asserting ? "INFO" : r.pass ? "PASS" : "FAIL",
                 n.c_str());
    if (r.asserting && !r.pass) all = false;
    suites.push_back(lct::suite_json(r));
  }
  p["pass"] = all;
  p["suites"] = suites;
  emit(p, out);
  return all ? lct::kExitOk : lct::kExitAssertionFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"long-code test compiler and verifier for constraint games"};
  app.set_help_flag("--help", "print help and exit");
  app.require_subcommand(1);
  int rc = lct::kExitOk;

  std::string in;
  std::string out;
  std::string fixture_name;
  std::string epsilon = "1/100";
  std::string config;
  std::vector<std::string> suite_args;
  std::uint64_t seed = default_seed();
  std::uint64_t samples = 20000;
  std::uint64_t sweeps = 200;
  int u = 1;
  int repeat_u = 2;
  int h = 0;
  int seesaw_dim = 2;
  int audit_dim = 4;
  bool paper = false;
  bool uniform = false;
  bool corrupt = false;
  bool exact = false;

  auto* fixture_cmd =
      app.add_subcommand("fixture", "emit a named fixture with its known "
                                    "strategies and reference values");
  fixture_cmd->add_option("name", fixture_name, "fixture name")->required();
  fixture_cmd->add_option("--out", out, "output file (default stdout)");
  fixture_cmd->callback([&] { emit(fixture_report(fixture_name), out); });

  auto* build_cmd = app.add_subcommand(
      "build", "turn a constraint system (or fixture) into an explicit game");
  build_cmd->add_option("--in", in, "bcs or lcs JSON file");
  build_cmd->add_option("--fixture", fixture_name, "fixture name");
  build_cmd->add_option("--out", out, "output file (default stdout)");
  build_cmd->callback([&] { emit(build_game_doc(in, fixture_name), out); });

  auto* transform_cmd =
      app.add_subcommand("transform", "apply a game transformation pass");
  transform_cmd->require_subcommand(1);
  auto add_pass = [&](const std::string& name, const std::string& help) {
    auto* cmd = transform_cmd->add_subcommand(name, help);
    cmd->add_option("--in", in, "game JSON file");
    cmd->add_option("--fixture", fixture_name, "fixture name");
    cmd->add_option("--out", out, "output file (default stdout)");
    return cmd;
  };
  auto* nonempty_cmd =
      add_pass("nonempty", "repair pairs without winning answers");
  nonempty_cmd->callback([&] {
    emit(lct::game_json(
             lct::ensure_nonempty_answers(load_game(in, fixture_name))),
         out);
  });
  auto* project_cmd = add_pass("project", "make every answer pair unique");
  project_cmd->callback([&] {
    emit(lct::game_json(lct::project(load_game(in, fixture_name))), out);
  });
  auto* repeat_cmd = add_pass("repeat", "play u independent copies at once");
  repeat_cmd->add_option("--u", repeat_u, "repetition count");
  repeat_cmd->callback([&] {
    emit(lct::game_json(lct::repeat(load_game(in, fixture_name), repeat_u)),
         out);
  });

  auto* compile_cmd = app.add_subcommand(
      "compile", "compile a synchronous game into the long-code test");
  compile_cmd->add_option("--in", in, "game JSON file");
  compile_cmd->add_option("--fixture", fixture_name, "fixture name");
  compile_cmd->add_option("--epsilon", epsilon, "noise rate p/q")->required();
  compile_cmd->add_option("--u", u, "parallel rounds");
  compile_cmd->add_option("--h", h, "answer bits (default: fit the answers)");
  compile_cmd->add_flag("--paper", paper,
                        "enforce epsilon < 1/72 and publish s' = 71/72");
  compile_cmd->add_option("--seed", seed, "sampler seed");
  compile_cmd->add_option("--out", out, "output file (default stdout)");
  compile_cmd->callback([&] {
    emit(compile_report(load_game(in, fixture_name),
                        lct::Rational::parse(epsilon), u, h, paper, seed),
         out);
  });

  auto* estimate_cmd =
      app.add_subcommand("estimate", "estimate a game or test value");
  estimate_cmd->require_subcommand(1);

  auto* classical_cmd = estimate_cmd->add_subcommand(
      "classical", "exact optimum over deterministic strategies");
  classical_cmd->add_option("--in", in, "game JSON file");
  classical_cmd->add_option("--fixture", fixture_name, "fixture name");
  classical_cmd->add_option("--out", out, "output file (default stdout)");
  classical_cmd->callback(
      [&] { emit(classical_report(load_game(in, fixture_name)), out); });

  auto* montecarlo_cmd = estimate_cmd->add_subcommand(
      "montecarlo", "sample the compiled test against the honest strategy");
  montecarlo_cmd->add_option("--fixture", fixture_name, "fixture name")
      ->required();
  montecarlo_cmd->add_option("--epsilon", epsilon, "noise rate p/q")
      ->required();
  montecarlo_cmd->add_option("--u", u, "parallel rounds");
  montecarlo_cmd->add_option("--h", h,
                             "answer bits (default: fit the answers)");
  montecarlo_cmd->add_option("--samples", samples, "round count");
  montecarlo_cmd->add_flag("--uniform", uniform,
                           "answer with independent fair bits instead");
  montecarlo_cmd->add_flag("--exact", exact,
                           "enumerate instead of sampling (narrow contexts)");
  montecarlo_cmd->add_option("--seed", seed, "sampler seed");
  montecarlo_cmd->add_option("--out", out, "output file (default stdout)");
  montecarlo_cmd->callback([&] {
    emit(montecarlo_report(fixture_name, lct::Rational::parse(epsilon), u, h,
                           samples, uniform, exact, seed),
         out);
  });

  auto* seesaw_cmd = estimate_cmd->add_subcommand(
      "seesaw", "alternating lower-bound optimization");
  seesaw_cmd->add_option("--in", in, "game JSON file");
  seesaw_cmd->add_option("--fixture", fixture_name, "fixture name");
  seesaw_cmd->add_option("--dim", seesaw_dim, "strategy dimension");
  seesaw_cmd->add_option("--samples", sweeps, "sweep count");
  seesaw_cmd->add_option("--seed", seed, "restart seed");
  seesaw_cmd->add_option("--out", out, "output file (default stdout)");
  seesaw_cmd->callback([&] {
    emit(seesaw_report(load_game(in, fixture_name), seesaw_dim,
                       static_cast<int>(sweeps), seed),
         out);
  });

  auto* audit_cmd = app.add_subcommand(
      "audit", "evaluate the soundness inequality chain on a fixture");
  audit_cmd->add_option("--fixture", fixture_name, "fixture name")
      ->required();
  audit_cmd->add_option("--epsilon", epsilon, "noise rate p/q")->required();
  audit_cmd->add_option("--u", u, "parallel rounds");
  audit_cmd->add_option("--h", h, "answer bits (default: fit the answers)");
  audit_cmd->add_flag("--corrupt", corrupt,
                      "audit structureless random observables instead of "
                      "the honest strategy");
  audit_cmd->add_option("--dim", audit_dim, "corrupt observable dimension");
  audit_cmd->add_option("--seed", seed, "observable seed");
  audit_cmd->add_option("--out", out, "output file (default stdout)");
  audit_cmd->callback([&] {
    emit(audit_report_doc(fixture_name, lct::Rational::parse(epsilon), u, h,
                          audit_dim, corrupt, seed),
         out);
  });

  auto* verify_cmd =
      app.add_subcommand("verify", "run named verification suites");
  verify_cmd->add_option("suites", suite_args,
                         "suite names (default: all of them)");
  verify_cmd->add_option("--config", config,
                         "JSON file with {\"suites\": [...], \"seed\": n}");
  verify_cmd->add_option("--seed", seed, "suite seed");
  verify_cmd->add_option("--out", out, "output file (default stdout)");
  verify_cmd->callback([&] { rc = run_verify(suite_args, config, seed, out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lct::kExitUsage;
  } catch (const lct::CapacityError& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return lct::kExitCapacity;
  } catch (const lct::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return lct::kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return lct::kExitUsage;
  }
  return rc;
}
