#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lct/boolfun.hpp"
#include "lct/games.hpp"
#include "lct/obsfourier.hpp"
#include "lct/quantum.hpp"

namespace lct {

// Default slack parameter of soundness audits.
inline constexpr double kDefaultDelta = 1.0 - 1.0 / std::numbers::sqrt2;

// Full enumeration over functions and noise patterns is performed only for
// joint contexts of at most this many variables.
inline constexpr int kMaxExactVars = 2;
// Cap on the number of u-fold support tuples an exact pass may materialize.
inline constexpr std::size_t kMaxSupportTuples = 4096;

// Parameters of the noisy three-query linear test compiled from a constraint
// system with a (pair, member) support distribution.
struct TestParams {
  NoiseSpec epsilon;
  int u = 1;
  Bcs bcs;
  ProjSupportDist dist;
  SectionPolicy policy = SectionPolicy::kLexMinTable;
  std::uint64_t seed = 0;
  bool record_mu = false;

  // Checks the constraint system and support, nonempty satisfying sets,
  // pairwise distinct contexts and the joint cube cap.
  void validate() const;
};

// Variable name of `name` in round l.
std::string round_var(int l, const std::string& name);

// Deterministic part of a round for a tuple of support entries: the joint
// contexts with round-prefixed variable names and the product constraint.
struct TestContext {
  VarSet w;
  VarSet u;   // subset of w
  BoolFun c;  // over w, -1 exactly on the jointly satisfying points
  std::vector<std::pair<std::size_t, std::size_t>> rounds;  // (pair, member)
};

TestContext make_context(const TestParams& params,
                         const std::vector<std::size_t>& entry_indices);

// The tuple sent to the first player.
struct AliceQuestion {
  VarSet w;
  VarSet u;
  BoolFun c;
  BoolFun f;       // over u
  BoolFun g;       // over w
  BoolFun gprime;  // over w: f (through restriction) times g times noise
  std::vector<std::pair<std::size_t, std::size_t>> rounds;
  std::optional<BoolFun> mu;  // kept only when params.record_mu
};

enum class BobSlot { kF = 0, kG = 1, kGPrime = 2 };

std::string to_string(BobSlot s);
BobSlot bob_slot_from_string(const std::string& s);

// The second player's query: a domain and the canonical section it names.
struct BobQuestion {
  BobSlot slot = BobSlot::kF;
  VarSet domain;  // u for kF, w otherwise
  BoolFun fun;    // canonical section representative
};

// Outcome of one round.
struct RoundVerdict {
  int rhs = 1;  // right-hand side of the parity check
  bool linear_ok = false;
  bool consistency_ok = false;

  bool accept() const { return linear_ok && consistency_ok; }
};

// The three queries named by a question, in answer-slot order.
std::array<BobQuestion, 3> induced_queries(const AliceQuestion& q,
                                           SectionPolicy policy);

// Product of the three section signs: the parity the answer bits must meet.
int answer_parity_rhs(const AliceQuestion& q, SectionPolicy policy);

// One verifier round: support tuple, uniform f and g, noise, query choice.
// params must pass validate(); the wrappers below check once up front.
std::pair<AliceQuestion, BobQuestion> sample_round(const TestParams& params,
                                                   RngStream& rng);

// Verdict on three +-1 bits from the first player and one from the second.
// bob_q must be one of the question's induced queries.
RoundVerdict decide(const AliceQuestion& alice_q, const BobQuestion& bob_q,
                    const std::array<int, 3>& a, int b,
                    SectionPolicy policy = SectionPolicy::kLexMinTable);

// Payload encodings of the implicit game.  Answers use {"bits": [...]} with
// 0 = +1 and 1 = -1.
Payload alice_payload(const AliceQuestion& q);
Payload bob_payload(const BobQuestion& q);
AliceQuestion alice_question_from_payload(const Payload& p);
BobQuestion bob_question_from_payload(const Payload& p);

ImplicitGame as_implicit_game(const TestParams& params);

// One sampled equation of the linear system underlying the test: three
// content-addressed variables and a +-1 right-hand side.
struct LinearViewEquation {
  std::array<std::string, 3> vars;
  int rhs = 1;
  bool degenerate = false;  // repeated variable
};

// Content-addressed variable id of a query: domain names plus a table hash.
std::string query_variable(const BobQuestion& q);

struct LinearView {
  std::function<LinearViewEquation(RngStream&)> sample_equation;
};

LinearView as_lcs_view(const TestParams& params);

// Pair-distribution matrix of the support entries.
PairDist support_matrix(const Bcs& bcs, const ProjSupportDist& dist);

// Binary observables answering the test's queries: alice(q, k) has the k-th
// reported bit as its +-1 outcome, bob(domain, s) answers the query
// (domain, s).  Signs follow the decider's folding conventions.
struct TestObservables {
  int dim = 0;
  std::function<CMatrix(const AliceQuestion&, int)> alice;
  std::function<CMatrix(const VarSet&, const BoolFun&)> bob;
};

// Honest strategy: play the per-round constraint measurements of a perfect
// strategy for bcs_game(bcs, support_matrix(bcs, dist)) and push the
// sampled satisfying assignments through the queried functions.
class CompletenessStrategy {
 public:
  // base must win the constraint game with probability at least 1 - 1e-9.
  CompletenessStrategy(TestParams params, SyncStrategy base);

  const TestParams& params() const { return params_; }
  const SyncStrategy& base() const { return base_; }

  // Joint responder; draws one correlated assignment pair per round.
  ImplicitStrategy implicit() const;

  // Materialized observables of dimension base.dim^u (capped at kMaxDim).
  TestObservables observables() const;

 private:
  TestParams params_;
  SyncStrategy base_;
};

// Independent random binary observable per distinct query, measurement
// consistent across repeated queries; a deliberately structureless
// test strategy for audit sanity sweeps.
TestObservables random_test_observables(const TestParams& params, int dim,
                                        std::uint64_t seed);

struct ExactTestReport {
  double value = 0;         // acceptance probability
  double linear_value = 0;  // parity check alone
  double triple_trace = 0;  // E[rhs * Re Tr(B_f B_g B_g')/d]
  std::optional<Rational> value_exact;  // dimension-one strategies only
  std::optional<Rational> linear_value_exact;
};

// Full enumeration over support tuples, both function draws, noise patterns
// and query slots; |w| is capped at kMaxExactVars.
ExactTestReport exact_test_report(const TestParams& params,
                                  const TestObservables& obs);

// All u-fold support tuples with their product masses.
struct SupportTuple {
  std::vector<std::size_t> entries;
  Rational mass;
};

std::vector<SupportTuple> support_tuples(const TestParams& params);

// Fourier data of the second player's observables at one support tuple.
struct TripleSpectra {
  VarSet w;
  VarSet u;
  BoolFun c;
  int dim = 0;
  std::vector<std::pair<std::size_t, std::size_t>> rounds;
  std::vector<std::pair<CubeSubset, CMatrix>> u_spec;  // folded, over u
  std::vector<std::pair<CubeSubset, CMatrix>> w_spec;  // folded and
                                                       // conditioned on (w, c)
};

TripleSpectra bob_spectra(const TestParams& params, const TestObservables& obs,
                          const std::vector<std::size_t>& entry_indices);

// (1/d) Re Tr of sum_beta U_hat(pi2(beta)) W_hat(beta)^2 (1-2eps)^|beta|.
// Equals the expectation over (f, g, noise) of rhs * Tr(B_f B_g B_g')/d at
// the spectra's contexts.
double exact_bias_fourier(const TripleSpectra& spectra,
                          const Rational& epsilon);

struct ParallelExtraction {
  ExplicitGame game;          // u-fold repetition of the constraint game
  GeneralStrategy strategy;   // squared-coefficient measurements with
                              // uniform member picks
  double value = 0;           // winning probability of the strategy
  double consistent_value = 0;  // wins counted only when the member pick
                                // equals the pair pick's restriction
};

// Measurement family {W_hat(beta)^2} for the first player and transposed
// {U_hat(alpha)^2} for the second, wired as answer measurements of the
// repeated constraint game; picks inside the measured subset are uniform.
// The spectra must cover every support tuple and pass completeness within
// 1e-6.
ParallelExtraction extract_parallel_strategy(
    const TestParams& params, const std::vector<TripleSpectra>& spectra);

struct InequalityEntry {
  std::string name;
  double lhs = 0;
  double rhs = 0;     // pass when lhs <= rhs + 1e-9
  double margin = 0;  // rhs - lhs
  bool pass = false;
};

struct AuditReport {
  double epsilon = 0;
  double delta = 0;
  double test_value = 0;
  double linear_value = 0;
  double triple_trace = 0;
  double fourier_form = 0;
  double extracted_value = 0;   // consistent-pick accounting
  double extraction_bound = 0;  // 4 eps delta^2
  double value_threshold = 0;   // 1 - (1 - delta)^2 / 36
  std::vector<InequalityEntry> entries;
  bool all_pass = false;
};

// Exact evaluation of the test's value, the triple-product trace bound, the
// collapsed Fourier form and the extracted repeated-game value, with every
// inequality of the soundness chain reported as a pass/fail entry.
AuditReport soundness_audit(const TestParams& params,
                            const TestObservables& obs,
                            double delta = kDefaultDelta);

}  // namespace lct
