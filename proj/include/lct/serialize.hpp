#pragma once

#include <cstdint>
#include <string>

#include "lct/games.hpp"
#include "lct/longcode.hpp"
#include "lct/quantum.hpp"
#include "lct/value.hpp"

namespace lct {

// Version string embedded in every report.
inline constexpr const char* kVersion = "lct 0.1.0";

// Rationals serialize as "p/q" ("p" when q == 1).
Payload rational_json(const Rational& r);
Rational rational_from_json(const Payload& p);

// Matrices serialize as nested row arrays of [re, im] pairs.
Payload matrix_json(const CMatrix& m);
CMatrix matrix_from_json(const Payload& p);

// {questions, answers, dist, decider, provenance}; the decider is the sparse
// list of accepted (x, y, a, b) tuples.
Payload game_json(const ExplicitGame& g);
ExplicitGame game_from_json(const Payload& p);

// {variables, constraints: [{context, satisfying}]} with hex bitmasks.
Payload bcs_json(const Bcs& b);
Bcs bcs_from_json(const Payload& p);

// The constraint system plus a parity list of +-1.
Payload lcs_json(const Lcs& l);
Lcs lcs_from_json(const Payload& p);

// {entries: [{alice, bob, mass}]}.
Payload dist_json(const ProjSupportDist& d);
ProjSupportDist dist_from_json(const Payload& p);

// {dim, questions: {label: {outcome index: matrix}}}.
Payload strategy_json(const SyncStrategy& s);
SyncStrategy strategy_from_json(const Payload& p);

// {point, radius, samples, method}.
Payload estimate_json(const ValueEstimate& e);
ValueEstimate estimate_from_json(const Payload& p);

// {epsilon, u, bcs, dist, policy, seed, record_mu}.
Payload params_json(const TestParams& t);
TestParams params_from_json(const Payload& p);

// {name, lhs, rhs, margin, pass}.
Payload entry_json(const InequalityEntry& e);
// Audit report as one document with named inequality entries.
Payload audit_json(const AuditReport& r);

// One round of a test transcript; serializes as a single JSON line
// {alice_q, bob_q, answers, verdict, seed}.
struct TranscriptRound {
  AliceQuestion alice_q;
  BobQuestion bob_q;
  Payload answer_a;
  Payload answer_b;
  RoundVerdict verdict;
  std::uint64_t seed = 0;
};

Payload round_json(const TranscriptRound& r);
TranscriptRound round_from_json(const Payload& p);

// Stable byte serialization: two-space indentation, sorted keys, trailing
// newline.  Equal payloads produce equal bytes.
std::string dump_canonical(const Payload& p);

void write_json_file(const std::string& path, const Payload& p);
Payload read_json_file(const std::string& path);

}  // namespace lct
