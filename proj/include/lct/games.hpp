#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lct/boolfun.hpp"
#include "lct/quantum.hpp"
#include "lct/rational.hpp"
#include "lct/rng.hpp"

namespace lct {

using Payload = nlohmann::json;

inline constexpr std::size_t kMaxExplicitQuestions = 10000;

// One-round two-player game with materialized question and answer sets.
// The decider is stored as the set of accepted (x, y, a, b) index tuples;
// tuples whose answer indices fall outside the answer sets are rejected by
// construction.
struct ExplicitGame {
  std::vector<std::string> questions;
  std::vector<std::vector<std::string>> answers;
  std::vector<std::vector<Rational>> dist;
  std::set<std::array<std::uint32_t, 4>> accepted;
  std::vector<std::string> provenance;

  static ExplicitGame with_questions(
      std::vector<std::string> questions,
      std::vector<std::vector<std::string>> answers);

  std::size_t nq() const { return questions.size(); }
  std::uint32_t question_index(const std::string& label) const;
  std::uint32_t answer_index(std::uint32_t q, const std::string& label) const;
  const Rational& mass(std::uint32_t x, std::uint32_t y) const;
  void set_mass(std::uint32_t x, std::uint32_t y, const Rational& r);
  void accept(std::uint32_t x, std::uint32_t y, std::uint32_t a,
              std::uint32_t b);
  bool accepts(std::uint32_t x, std::uint32_t y, std::uint32_t a,
               std::uint32_t b) const;
  // Question pairs with positive mass, in lexicographic order.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> supported_pairs() const;
  // Questions with positive row mass (asked to the first player) and with
  // positive column mass (asked to the second player).
  std::vector<std::uint32_t> row_questions() const;
  std::vector<std::uint32_t> col_questions() const;
  // Throws DomainError unless the distribution sums to one, all masses are
  // nonnegative and every accepted tuple is within range.
  void validate() const;
};

bool operator==(const ExplicitGame& a, const ExplicitGame& b);
inline bool operator!=(const ExplicitGame& a, const ExplicitGame& b) {
  return !(a == b);
}

// Symmetric distribution and a diagonal decider rejecting unequal answers.
bool is_synchronous(const ExplicitGame& g);
// Every (supported question pair, first answer) admits at most one winning
// second answer.
bool is_projection(const ExplicitGame& g);

double winning_probability(const ExplicitGame& g, const SyncStrategy& s);
double winning_probability(const ExplicitGame& g, const GeneralStrategy& s);

// Game given by procedures instead of tables; questions and answers are
// structured JSON payloads.  The sampler must be deterministic given the
// stream and the decider total on sampled questions.
struct ImplicitGame {
  std::function<std::pair<Payload, Payload>(RngStream&)> sampler;
  std::function<bool(const Payload& qa, const Payload& qb, const Payload& aa,
                     const Payload& ab)>
      decider;
  int randomness_budget = 0;
  int answer_arity_a = 1;
  int answer_arity_b = 1;
};

// Joint responder for implicit games: both answers are produced together so
// strategies may sample correlated outcomes directly.
struct ImplicitStrategy {
  std::function<std::pair<Payload, Payload>(const Payload& qa,
                                            const Payload& qb, RngStream&)>
      respond;
};

// Boolean constraint: a context of variables and the set of satisfying
// assignments over that context.
struct Constraint {
  VarSet context;
  CubeSubset satisfying;
};

// Indicator of the satisfying set, -1 (true) exactly on satisfying points.
BoolFun constraint_fun(const Constraint& c);

struct Bcs {
  VarSet variables;
  std::vector<Constraint> constraints;

  // Contexts must be subsets of the variable set and match their satisfying
  // sets' domains.
  void validate() const;
};

// Linear constraint system: every satisfying set is the parity-b_i subset of
// its context cube.
struct Lcs {
  Bcs bcs;
  std::vector<int> parity;

  void validate() const;
};

Lcs make_lcs(
    const VarSet& variables,
    const std::vector<std::pair<std::vector<std::string>, int>>& equations);

// Answer label for an assignment: '0' = +1 and '1' = -1, variable 0 first,
// so the label is the point index written in binary.
std::string assignment_label(int nvars, std::uint32_t point);
std::uint32_t assignment_from_label(int nvars, const std::string& label);

using PairDist = std::vector<std::vector<Rational>>;

// Constraint-constraint game: both players get constraint indices, answer
// with satisfying assignments and win iff the assignments agree on the
// intersection of the two contexts.  Question labels are "c<k>".
ExplicitGame bcs_game(const Bcs& b, const PairDist& pi);

// Distribution over (pair constraint, member constraint) with the member's
// context contained in the pair's context.
struct ProjSupportDist {
  struct Entry {
    std::size_t alice = 0;
    std::size_t bob = 0;
    Rational mass;
  };
  std::vector<Entry> entries;

  void validate(const Bcs& b) const;
};

// Constraint system whose bcs_game under `dist` plays the projected form of
// the source game: one single constraint per source question over h fresh
// variables, one pair constraint per supported off-diagonal question pair.
struct ProjectedBcs {
  Bcs bcs;
  ProjSupportDist dist;
  int h = 0;
  std::vector<std::size_t> single_of_question;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_of_questions;
};

// Requires a diagonal decider that rejects unequal answers and diagonal
// consistency (winning pairs restrict to winning diagonal answers); answers
// are re-encoded as h-bit indices, so every answer set may have at most 2^h
// members.  The distribution need not be symmetric.
ProjectedBcs projected_bcs(const ExplicitGame& g, int h);

PairDist pair_dist_matrix(const ProjectedBcs& p);
ExplicitGame projected_game(const ProjectedBcs& p);

// Constraint-variable game: the first player gets an equation index
// ("e<i>"), the second a uniformly chosen variable of that equation (label =
// variable name); they win iff the assignment matches the bit.
ExplicitGame lcs_game(const Lcs& l, const std::vector<Rational>& pi);

// One random PVM per question with outcome ranks spreading d over the
// answer set (zero ranks when d is smaller than the answer count).
SyncStrategy random_sync_strategy(const ExplicitGame& g, int d,
                                  RngStream& rng);

struct BiasPair {
  double direct = 0;
  double formula = 0;
};

// Bias of a synchronous strategy on the constraint-variable game, computed
// both from the winning probability and from the observable inner-product
// formula E_i E_{j in S_i} <A^i_j, B^j>.
BiasPair lcs_bias(const Lcs& l, const std::vector<Rational>& pi,
                  const SyncStrategy& s);

}  // namespace lct
