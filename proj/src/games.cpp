#include "lct/games.hpp"

#include <algorithm>
#include <cstddef>

#include "lct/errors.hpp"
#include "lct/tolerances.hpp"

namespace lct {

ExplicitGame ExplicitGame::with_questions(
    std::vector<std::string> questions,
    std::vector<std::vector<std::string>> answers) {
  if (questions.size() != answers.size()) {
    throw DomainError("answer sets must match the question count");
  }
  if (questions.size() > kMaxExplicitQuestions) {
    throw CapacityError("too many questions to materialize");
  }
  ExplicitGame g;
  g.questions = std::move(questions);
  g.answers = std::move(answers);
  g.dist.assign(g.questions.size(),
                std::vector<Rational>(g.questions.size(), Rational(0)));
  return g;
}

std::uint32_t ExplicitGame::question_index(const std::string& label) const {
  for (std::size_t i = 0; i < questions.size(); ++i) {
    if (questions[i] == label) return static_cast<std::uint32_t>(i);
  }
  throw DomainError("unknown question label: " + label);
}

std::uint32_t ExplicitGame::answer_index(std::uint32_t q,
                                         const std::string& label) const {
  const auto& set = answers.at(q);
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set[i] == label) return static_cast<std::uint32_t>(i);
  }
  throw DomainError("unknown answer label '" + label + "' for question " +
                    questions.at(q));
}

const Rational& ExplicitGame::mass(std::uint32_t x, std::uint32_t y) const {
  return dist.at(x).at(y);
}

void ExplicitGame::set_mass(std::uint32_t x, std::uint32_t y,
                            const Rational& r) {
  dist.at(x).at(y) = r;
}

void ExplicitGame::accept(std::uint32_t x, std::uint32_t y, std::uint32_t a,
                          std::uint32_t b) {
  if (a >= answers.at(x).size() || b >= answers.at(y).size()) {
    throw DomainError("accepted tuple outside the answer sets");
  }
  accepted.insert({x, y, a, b});
}

bool ExplicitGame::accepts(std::uint32_t x, std::uint32_t y, std::uint32_t a,
                           std::uint32_t b) const {
  return accepted.count({x, y, a, b}) != 0;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>>
ExplicitGame::supported_pairs() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t x = 0; x < nq(); ++x) {
    for (std::uint32_t y = 0; y < nq(); ++y) {
      if (dist[x][y] > Rational(0)) out.emplace_back(x, y);
    }
  }
  return out;
}

std::vector<std::uint32_t> ExplicitGame::row_questions() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < nq(); ++x) {
    Rational row(0);
    for (std::uint32_t y = 0; y < nq(); ++y) row += dist[x][y];
    if (row > Rational(0)) out.push_back(x);
  }
  return out;
}

std::vector<std::uint32_t> ExplicitGame::col_questions() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t y = 0; y < nq(); ++y) {
    Rational col(0);
    for (std::uint32_t x = 0; x < nq(); ++x) col += dist[x][y];
    if (col > Rational(0)) out.push_back(y);
  }
  return out;
}

void ExplicitGame::validate() const {
  if (answers.size() != nq() || dist.size() != nq()) {
    throw DomainError("game table sizes disagree with the question count");
  }
  Rational total(0);
  for (std::uint32_t x = 0; x < nq(); ++x) {
    if (dist[x].size() != nq()) {
      throw DomainError("distribution table is not square");
    }
    for (std::uint32_t y = 0; y < nq(); ++y) {
      if (dist[x][y] < Rational(0)) {
        throw DomainError("negative question-pair mass");
      }
      total += dist[x][y];
    }
  }
  if (total != Rational(1)) {
    throw DomainError("question distribution must sum to one, got " +
                      total.to_string());
  }
  for (const auto& t : accepted) {
    if (t[0] >= nq() || t[1] >= nq() || t[2] >= answers[t[0]].size() ||
        t[3] >= answers[t[1]].size()) {
      throw DomainError("accepted tuple outside the answer sets");
    }
  }
}

bool operator==(const ExplicitGame& a, const ExplicitGame& b) {
  return a.questions == b.questions && a.answers == b.answers &&
         a.dist == b.dist && a.accepted == b.accepted &&
         a.provenance == b.provenance;
}

bool is_synchronous(const ExplicitGame& g) {
  for (std::uint32_t x = 0; x < g.nq(); ++x) {
    for (std::uint32_t y = 0; y < g.nq(); ++y) {
      if (g.dist[x][y] != g.dist[y][x]) return false;
    }
  }
  for (const auto& t : g.accepted) {
    if (t[0] == t[1] && t[2] != t[3]) return false;
  }
  return true;
}

bool is_projection(const ExplicitGame& g) {
  std::map<std::array<std::uint32_t, 3>, int> winners;
  for (const auto& t : g.accepted) {
    if (!(g.dist[t[0]][t[1]] > Rational(0))) continue;
    if (++winners[{t[0], t[1], t[2]}] > 1) return false;
  }
  return true;
}

double winning_probability(const ExplicitGame& g, const SyncStrategy& s) {
  double total = 0;
  for (const auto& t : g.accepted) {
    const Rational& mass = g.dist[t[0]][t[1]];
    if (!(mass > Rational(0))) continue;
    total += mass.to_double() *
             s.correlation(g.questions[t[0]], g.questions[t[1]],
                           static_cast<int>(t[2]), static_cast<int>(t[3]));
  }
  return total;
}

double winning_probability(const ExplicitGame& g, const GeneralStrategy& s) {
  double total = 0;
  for (const auto& t : g.accepted) {
    const Rational& mass = g.dist[t[0]][t[1]];
    if (!(mass > Rational(0))) continue;
    total += mass.to_double() *
             s.correlation(g.questions[t[0]], g.questions[t[1]],
                           static_cast<int>(t[2]), static_cast<int>(t[3]));
  }
  return total;
}

BoolFun constraint_fun(const Constraint& c) {
  return BoolFun::indicator(c.satisfying);
}

void Bcs::validate() const {
  for (const auto& c : constraints) {
    if (!c.context.subset_of(variables)) {
      throw DomainError("constraint context is not a subset of the variables");
    }
    if (c.satisfying.domain() != c.context) {
      throw DomainError("satisfying set domain disagrees with the context");
    }
  }
}

void Lcs::validate() const {
  bcs.validate();
  if (parity.size() != bcs.constraints.size()) {
    throw DomainError("one parity per equation required");
  }
  for (std::size_t i = 0; i < parity.size(); ++i) {
    if (parity[i] != 1 && parity[i] != -1) {
      throw DomainError("equation parity must be +1 or -1");
    }
    const Constraint& c = bcs.constraints[i];
    int n = c.context.size();
    for (std::uint32_t p = 0; p < c.satisfying.npoints(); ++p) {
      int prod = 1;
      for (int v = 0; v < n; ++v) prod *= point_value(p, v, n);
      if (c.satisfying.test(p) != (prod == parity[i])) {
        throw DomainError("satisfying set is not the stated parity set");
      }
    }
  }
}

Lcs make_lcs(
    const VarSet& variables,
    const std::vector<std::pair<std::vector<std::string>, int>>& equations) {
  Lcs l;
  l.bcs.variables = variables;
  for (const auto& [names, b] : equations) {
    Constraint c;
    c.context = VarSet(names);
    c.satisfying = CubeSubset(c.context);
    int n = c.context.size();
    for (std::uint32_t p = 0; p < c.satisfying.npoints(); ++p) {
      int prod = 1;
      for (int v = 0; v < n; ++v) prod *= point_value(p, v, n);
      if (prod == b) c.satisfying.set(p);
    }
    l.bcs.constraints.push_back(std::move(c));
    l.parity.push_back(b);
  }
  l.validate();
  return l;
}

std::string assignment_label(int nvars, std::uint32_t point) {
  std::string out(static_cast<std::size_t>(nvars), '0');
  for (int i = 0; i < nvars; ++i) {
    if (point_value(point, i, nvars) == -1) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

std::uint32_t assignment_from_label(int nvars, const std::string& label) {
  if (static_cast<int>(label.size()) != nvars) {
    throw DomainError("assignment label length disagrees with the context");
  }
  std::uint32_t p = 0;
  for (int i = 0; i < nvars; ++i) {
    char ch = label[static_cast<std::size_t>(i)];
    if (ch != '0' && ch != '1') {
      throw DomainError("assignment label must be over '0'/'1'");
    }
    p = (p << 1) | (ch == '1' ? 1u : 0u);
  }
  return p;
}

namespace {

// Positions (in each context) of the variables the two contexts share.
std::vector<std::pair<int, int>> shared_positions(const VarSet& a,
                                                  const VarSet& b) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < a.size(); ++i) {
    if (b.contains(a.at(i))) out.emplace_back(i, b.index_of(a.at(i)));
  }
  return out;
}

bool agree_on_shared(std::uint32_t pa, int na, std::uint32_t pb, int nb,
                     const std::vector<std::pair<int, int>>& shared) {
  for (const auto& [ia, ib] : shared) {
    if (point_value(pa, ia, na) != point_value(pb, ib, nb)) return false;
  }
  return true;
}

}  // namespace

ExplicitGame bcs_game(const Bcs& b, const PairDist& pi) {
  b.validate();
  std::size_t m = b.constraints.size();
  if (pi.size() != m) {
    throw DomainError("pair distribution does not match the constraint count");
  }
  std::vector<std::string> questions(m);
  std::vector<std::vector<std::string>> answers(m);
  std::vector<std::vector<std::uint32_t>> points(m);
  for (std::size_t k = 0; k < m; ++k) {
    questions[k] = "c" + std::to_string(k);
    for (std::uint32_t p : b.constraints[k].satisfying.members()) {
      points[k].push_back(p);
      answers[k].push_back(assignment_label(b.constraints[k].context.size(), p));
    }
  }
  ExplicitGame g = ExplicitGame::with_questions(std::move(questions),
                                                std::move(answers));
  g.dist = pi;
  for (std::uint32_t ka = 0; ka < m; ++ka) {
    for (std::uint32_t kb = 0; kb < m; ++kb) {
      const VarSet& ctx_a = b.constraints[ka].context;
      const VarSet& ctx_b = b.constraints[kb].context;
      auto shared = shared_positions(ctx_a, ctx_b);
      for (std::uint32_t a = 0; a < points[ka].size(); ++a) {
        for (std::uint32_t bb = 0; bb < points[kb].size(); ++bb) {
          if (agree_on_shared(points[ka][a], ctx_a.size(), points[kb][bb],
                              ctx_b.size(), shared)) {
            g.accept(ka, kb, a, bb);
          }
        }
      }
    }
  }
  g.validate();
  g.provenance.push_back("bcs_game");
  return g;
}

void ProjSupportDist::validate(const Bcs& b) const {
  Rational total(0);
  for (const auto& e : entries) {
    if (e.alice >= b.constraints.size() || e.bob >= b.constraints.size()) {
      throw DomainError("support entry outside the constraint list");
    }
    if (!b.constraints[e.bob].context.subset_of(
            b.constraints[e.alice].context)) {
      throw DomainError(
          "member context must be contained in the pair context");
    }
    if (!(e.mass > Rational(0))) {
      throw DomainError("support entries must carry positive mass");
    }
    total += e.mass;
  }
  if (total != Rational(1)) {
    throw DomainError("support distribution must sum to one");
  }
}

ProjectedBcs projected_bcs(const ExplicitGame& g, int h) {
  g.validate();
  if (h < 1 || 2 * h > kMaxCubeVars) {
    throw CapacityError("answer-length bound out of range");
  }
  for (const auto& t : g.accepted) {
    if (t[0] == t[1] && t[2] != t[3]) {
      throw DomainError(
          "diagonal decider must reject unequal answers before projecting");
    }
  }
  std::uint32_t cap = 1u << h;
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    if (g.answers[q].size() > cap) {
      throw CapacityError("answer set of " + g.questions[q] +
                          " does not fit in " + std::to_string(h) + " bits");
    }
  }
  for (const auto& [x, y] : g.supported_pairs()) {
    for (const auto& t : g.accepted) {
      if (t[0] != x || t[1] != y) continue;
      if (!g.accepts(x, x, t[2], t[2]) || !g.accepts(y, y, t[3], t[3])) {
        throw DomainError(
            "winning answers must restrict to winning diagonal answers");
      }
    }
  }

  ProjectedBcs out;
  out.h = h;
  std::vector<std::string> var_names;
  std::vector<std::vector<std::string>> ctx_names(g.nq());
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    for (int j = 0; j < h; ++j) {
      std::string name = "q" + g.questions[q] + "#" + std::to_string(j);
      var_names.push_back(name);
      ctx_names[q].push_back(name);
    }
  }
  out.bcs.variables = VarSet(var_names);

  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    Constraint c;
    c.context = VarSet(ctx_names[q]);
    c.satisfying = CubeSubset(c.context);
    for (std::uint32_t a = 0; a < g.answers[q].size(); ++a) {
      if (g.accepts(q, q, a, a)) c.satisfying.set(a);
    }
    out.single_of_question.push_back(out.bcs.constraints.size());
    out.bcs.constraints.push_back(std::move(c));
  }

  for (const auto& [x, y] : g.supported_pairs()) {
    if (x == y) {
      out.dist.entries.push_back(
          {out.single_of_question[x], out.single_of_question[x],
           g.dist[x][y]});
      continue;
    }
    std::vector<std::string> pair_names = ctx_names[x];
    pair_names.insert(pair_names.end(), ctx_names[y].begin(),
                      ctx_names[y].end());
    Constraint c;
    c.context = VarSet(pair_names);
    c.satisfying = CubeSubset(c.context);
    for (const auto& t : g.accepted) {
      if (t[0] != x || t[1] != y) continue;
      c.satisfying.set((t[2] << h) | t[3]);
    }
    std::size_t k = out.bcs.constraints.size();
    out.pair_of_questions[{x, y}] = k;
    out.bcs.constraints.push_back(std::move(c));
    Rational half = g.dist[x][y] / Rational(2);
    out.dist.entries.push_back({k, out.single_of_question[x], half});
    out.dist.entries.push_back({k, out.single_of_question[y], half});
  }
  out.bcs.validate();
  out.dist.validate(out.bcs);
  return out;
}

PairDist pair_dist_matrix(const ProjectedBcs& p) {
  std::size_t m = p.bcs.constraints.size();
  PairDist pi(m, std::vector<Rational>(m, Rational(0)));
  for (const auto& e : p.dist.entries) pi[e.alice][e.bob] += e.mass;
  return pi;
}

ExplicitGame projected_game(const ProjectedBcs& p) {
  ExplicitGame g = bcs_game(p.bcs, pair_dist_matrix(p));
  g.provenance.push_back("projected_bcs");
  return g;
}

ExplicitGame lcs_game(const Lcs& l, const std::vector<Rational>& pi) {
  l.validate();
  std::size_t m = l.bcs.constraints.size();
  if (pi.size() != m) {
    throw DomainError("equation distribution does not match the system");
  }
  std::vector<std::string> questions;
  std::vector<std::vector<std::string>> answers;
  std::vector<std::vector<std::uint32_t>> points(m);
  for (std::size_t i = 0; i < m; ++i) {
    questions.push_back("e" + std::to_string(i));
    std::vector<std::string> labels;
    for (std::uint32_t p : l.bcs.constraints[i].satisfying.members()) {
      points[i].push_back(p);
      labels.push_back(
          assignment_label(l.bcs.constraints[i].context.size(), p));
    }
    answers.push_back(std::move(labels));
  }
  for (const auto& name : l.bcs.variables.names()) {
    questions.push_back(name);
    answers.push_back({"0", "1"});
  }
  ExplicitGame g = ExplicitGame::with_questions(std::move(questions),
                                                std::move(answers));
  Rational total(0);
  for (std::size_t i = 0; i < m; ++i) {
    const Constraint& c = l.bcs.constraints[i];
    if (!(pi[i] >= Rational(0))) {
      throw DomainError("negative equation mass");
    }
    total += pi[i];
    if (c.context.size() == 0) {
      if (pi[i] > Rational(0)) {
        throw DomainError("vacuous equation cannot carry question mass");
      }
      continue;
    }
    Rational share = pi[i] / Rational(c.context.size());
    for (int v = 0; v < c.context.size(); ++v) {
      std::uint32_t yq = g.question_index(c.context.at(v));
      g.set_mass(static_cast<std::uint32_t>(i), yq, share);
      for (std::uint32_t a = 0; a < points[i].size(); ++a) {
        std::uint32_t bit =
            point_value(points[i][a], v, c.context.size()) == -1 ? 1u : 0u;
        g.accept(static_cast<std::uint32_t>(i), yq, a, bit);
      }
    }
  }
  if (total != Rational(1)) {
    throw DomainError("equation distribution must sum to one");
  }
  g.validate();
  g.provenance.push_back("lcs_game");
  return g;
}

SyncStrategy random_sync_strategy(const ExplicitGame& g, int d,
                                  RngStream& rng) {
  SyncStrategy s;
  s.dim = d;
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    int k = static_cast<int>(g.answers[q].size());
    if (k == 0) {
      throw DomainError("cannot build a measurement for an empty answer set");
    }
    std::vector<int> ranks(static_cast<std::size_t>(k), d / k);
    for (int extra = d % k; extra > 0; --extra) {
      ranks[rng.uniform_below(static_cast<std::uint64_t>(k))] += 1;
    }
    s.pvms.emplace(g.questions[q], PVM{random_pvm(d, ranks, rng)});
  }
  return s;
}

BiasPair lcs_bias(const Lcs& l, const std::vector<Rational>& pi,
                  const SyncStrategy& s) {
  ExplicitGame g = lcs_game(l, pi);
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    const PVM& pvm = s.pvm(g.questions[q]);
    if (pvm.outcomes() != static_cast<int>(g.answers[q].size()) ||
        pvm.validity_residual() > kTolAlgebra) {
      throw DomainError("strategy measurement invalid for question " +
                        g.questions[q]);
    }
  }
  BiasPair out;
  out.direct = 2 * winning_probability(g, s) - 1;

  double formula = 0;
  int d = s.dim;
  for (std::size_t i = 0; i < l.bcs.constraints.size(); ++i) {
    if (!(pi[i] > Rational(0))) continue;
    const Constraint& c = l.bcs.constraints[i];
    const PVM& alice = s.pvm("e" + std::to_string(i));
    std::vector<std::uint32_t> labels = c.satisfying.members();
    double inner = 0;
    for (int v = 0; v < c.context.size(); ++v) {
      CMatrix a_obs = observable_from_assignment_pvm(c.context, labels,
                                                     alice.elems, c.context.at(v));
      const PVM& bob = s.pvm(c.context.at(v));
      CMatrix b_obs = bob.elems[0] - bob.elems[1];
      inner += ((a_obs * b_obs).trace().real() / d);
    }
    formula += pi[i].to_double() * inner / c.context.size();
  }
  out.formula = formula;
  return out;
}

}  // namespace lct
