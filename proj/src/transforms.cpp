#include "lct/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lct/errors.hpp"

namespace lct {

std::string pair_label(const std::string& x, const std::string& y) {
  return "p:" + x + "|" + y;
}

std::string pair_answer_label(const std::string& a, const std::string& b) {
  return a + "|" + b;
}

ExplicitGame ensure_nonempty_answers(const ExplicitGame& g) {
  g.validate();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> dead;
  for (const auto& [x, y] : g.supported_pairs()) {
    bool live = false;
    for (std::uint32_t a = 0; a < g.answers[x].size() && !live; ++a) {
      for (std::uint32_t b = 0; b < g.answers[y].size() && !live; ++b) {
        live = g.accepts(x, y, a, b);
      }
    }
    if (!live) dead.emplace_back(x, y);
  }
  if (dead.empty()) return g;

  std::vector<std::string> questions = g.questions;
  std::vector<std::vector<std::string>> answers = g.answers;
  std::vector<std::string> bit_answers = {"+1", "-1"};
  struct Repair {
    std::uint32_t bob;
    std::uint32_t alice_plus;
    std::uint32_t alice_minus;
  };
  std::vector<Repair> repairs;
  for (const auto& [x, y] : dead) {
    std::string base = "d:" + g.questions[x] + "|" + g.questions[y];
    Repair r;
    r.bob = static_cast<std::uint32_t>(questions.size());
    questions.push_back(base);
    answers.push_back(bit_answers);
    r.alice_plus = static_cast<std::uint32_t>(questions.size());
    questions.push_back(base + ":+1");
    answers.push_back(bit_answers);
    r.alice_minus = static_cast<std::uint32_t>(questions.size());
    questions.push_back(base + ":-1");
    answers.push_back(bit_answers);
    repairs.push_back(r);
  }

  ExplicitGame out = ExplicitGame::with_questions(questions, answers);
  for (std::uint32_t x = 0; x < g.nq(); ++x) {
    for (std::uint32_t y = 0; y < g.nq(); ++y) {
      out.set_mass(x, y, g.dist[x][y]);
    }
  }
  out.accepted = g.accepted;
  for (std::size_t i = 0; i < dead.size(); ++i) {
    const auto& [x, y] = dead[i];
    const Repair& r = repairs[i];
    Rational half = g.dist[x][y] / Rational(2);
    out.set_mass(x, y, Rational(0));
    out.set_mass(r.alice_plus, r.bob, half);
    out.set_mass(r.alice_minus, r.bob, half);
    out.accept(r.alice_plus, r.bob, 0, 0);
    out.accept(r.alice_minus, r.bob, 1, 1);
    for (std::uint32_t q : {r.bob, r.alice_plus, r.alice_minus}) {
      out.accept(q, q, 0, 0);
      out.accept(q, q, 1, 1);
    }
  }
  out.validate();
  out.provenance = g.provenance;
  out.provenance.push_back("nonempty");
  return out;
}

ExplicitGame project(const ExplicitGame& g) {
  g.validate();
  auto pairs = g.supported_pairs();

  std::vector<std::string> questions;
  std::vector<std::vector<std::string>> answers;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_idx;
  for (const auto& [x, y] : pairs) {
    pair_idx[{x, y}] = static_cast<std::uint32_t>(questions.size());
    questions.push_back(pair_label(g.questions[x], g.questions[y]));
    std::vector<std::string> prod;
    for (const auto& a : g.answers[x]) {
      for (const auto& b : g.answers[y]) {
        prod.push_back(pair_answer_label(a, b));
      }
    }
    answers.push_back(std::move(prod));
  }
  std::map<std::uint32_t, std::uint32_t> single_idx;
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    bool used = false;
    for (const auto& [x, y] : pairs) used = used || x == q || y == q;
    if (!used) continue;
    single_idx[q] = static_cast<std::uint32_t>(questions.size());
    questions.push_back(g.questions[q]);
    answers.push_back(g.answers[q]);
  }

  ExplicitGame out = ExplicitGame::with_questions(std::move(questions),
                                                  std::move(answers));
  for (const auto& [x, y] : pairs) {
    std::uint32_t pq = pair_idx.at({x, y});
    Rational half = g.dist[x][y] / Rational(2);
    out.set_mass(pq, single_idx.at(x), out.mass(pq, single_idx.at(x)) + half);
    out.set_mass(pq, single_idx.at(y), out.mass(pq, single_idx.at(y)) + half);
  }
  std::uint32_t ny = 0;
  for (const auto& t : g.accepted) {
    auto it = pair_idx.find({t[0], t[1]});
    if (it == pair_idx.end()) continue;
    ny = static_cast<std::uint32_t>(g.answers[t[1]].size());
    std::uint32_t pa = t[2] * ny + t[3];
    out.accept(it->second, single_idx.at(t[0]), pa, t[2]);
    out.accept(it->second, single_idx.at(t[1]), pa, t[3]);
  }
  out.validate();
  out.provenance = g.provenance;
  out.provenance.push_back("project");
  return out;
}

namespace {

std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t cap,
                            const char* what) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) throw CapacityError(what);
    v *= base;
  }
  if (v > cap) throw CapacityError(what);
  return v;
}

// All u-tuples over [base] in odometer order (first coordinate most
// significant).
std::vector<std::vector<std::uint32_t>> all_tuples(std::uint32_t base,
                                                   int u) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(static_cast<std::size_t>(u), 0);
  for (;;) {
    out.push_back(cur);
    int pos = u - 1;
    while (pos >= 0 && ++cur[static_cast<std::size_t>(pos)] == base) {
      cur[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return out;
}

std::string joined_label(const ExplicitGame& g,
                         const std::vector<std::uint32_t>& tuple) {
  std::string s;
  for (std::size_t l = 0; l < tuple.size(); ++l) {
    if (l > 0) s += "|";
    s += g.questions[tuple[l]];
  }
  return s;
}

}  // namespace

ExplicitGame repeat(const ExplicitGame& g, int u) {
  if (u < 1) throw DomainError("repetition count must be positive");
  if (u == 1) return g;
  g.validate();
  std::uint64_t nq = checked_power(g.nq(), u, 100, "repeated question set too large");
  auto tuples = all_tuples(static_cast<std::uint32_t>(g.nq()), u);

  std::vector<std::string> questions;
  std::vector<std::vector<std::string>> answers;
  std::vector<std::vector<std::uint32_t>> ans_sizes;
  for (const auto& t : tuples) {
    questions.push_back(joined_label(g, t));
    std::vector<std::string> prod = {""};
    std::vector<std::uint32_t> sizes;
    for (std::uint32_t q : t) {
      sizes.push_back(static_cast<std::uint32_t>(g.answers[q].size()));
      std::vector<std::string> next;
      for (const auto& prefix : prod) {
        for (const auto& a : g.answers[q]) {
          next.push_back(prefix.empty() ? a : prefix + "|" + a);
        }
      }
      prod = std::move(next);
    }
    answers.push_back(std::move(prod));
    ans_sizes.push_back(std::move(sizes));
  }

  ExplicitGame out = ExplicitGame::with_questions(std::move(questions),
                                                  std::move(answers));
  std::map<std::pair<std::uint32_t, std::uint32_t>,
           std::vector<std::pair<std::uint32_t, std::uint32_t>>>
      acc;
  for (const auto& t : g.accepted) {
    acc[{t[0], t[1]}].emplace_back(t[2], t[3]);
  }
  for (std::uint32_t xi = 0; xi < nq; ++xi) {
    for (std::uint32_t yi = 0; yi < nq; ++yi) {
      Rational mass(1);
      bool supported = true;
      std::uint64_t combos = 1;
      for (int l = 0; l < u && supported; ++l) {
        std::uint32_t x = tuples[xi][static_cast<std::size_t>(l)];
        std::uint32_t y = tuples[yi][static_cast<std::size_t>(l)];
        mass *= g.dist[x][y];
        supported = g.dist[x][y] > Rational(0);
        auto it = acc.find({x, y});
        combos *= (it == acc.end() ? 0 : it->second.size());
      }
      if (!supported) continue;
      out.set_mass(xi, yi, mass);
      if (combos > 1000000) {
        throw CapacityError("repeated decider table too large");
      }
      std::vector<std::size_t> pick(static_cast<std::size_t>(u), 0);
      if (combos == 0) continue;
      for (;;) {
        std::uint32_t ai = 0;
        std::uint32_t bi = 0;
        for (int l = 0; l < u; ++l) {
          std::uint32_t x = tuples[xi][static_cast<std::size_t>(l)];
          std::uint32_t y = tuples[yi][static_cast<std::size_t>(l)];
          const auto& ab = acc.at({x, y})[pick[static_cast<std::size_t>(l)]];
          ai = ai * ans_sizes[xi][static_cast<std::size_t>(l)] + ab.first;
          bi = bi * ans_sizes[yi][static_cast<std::size_t>(l)] + ab.second;
        }
        out.accept(xi, yi, ai, bi);
        int pos = u - 1;
        while (pos >= 0) {
          std::uint32_t x = tuples[xi][static_cast<std::size_t>(pos)];
          std::uint32_t y = tuples[yi][static_cast<std::size_t>(pos)];
          if (++pick[static_cast<std::size_t>(pos)] <
              acc.at({x, y}).size()) {
            break;
          }
          pick[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
  }
  out.validate();
  out.provenance = g.provenance;
  out.provenance.push_back("repeat:" + std::to_string(u));
  return out;
}

ImplicitGame repeat_implicit(const ExplicitGame& g, int u) {
  if (u < 1) throw DomainError("repetition count must be positive");
  g.validate();
  auto pairs = g.supported_pairs();
  std::vector<Rational> weights;
  for (const auto& [x, y] : pairs) weights.push_back(g.dist[x][y]);

  ImplicitGame out;
  out.randomness_budget = u * 64;
  out.answer_arity_a = u;
  out.answer_arity_b = u;
  out.sampler = [g, pairs, weights, u](RngStream& rng) {
    Payload qa;
    Payload qb;
    qa["rounds"] = Payload::array();
    qb["rounds"] = Payload::array();
    for (int l = 0; l < u; ++l) {
      const auto& [x, y] = pairs[rng.pick_weighted(weights)];
      qa["rounds"].push_back(g.questions[x]);
      qb["rounds"].push_back(g.questions[y]);
    }
    return std::make_pair(qa, qb);
  };
  out.decider = [g, u](const Payload& qa, const Payload& qb,
                       const Payload& aa, const Payload& ab) {
    for (int i = 0; i < u; ++i) {
      std::size_t l = static_cast<std::size_t>(i);
      std::uint32_t x = g.question_index(qa.at("rounds").at(l));
      std::uint32_t y = g.question_index(qb.at("rounds").at(l));
      std::uint32_t a = g.answer_index(x, aa.at("answers").at(l));
      std::uint32_t b = g.answer_index(y, ab.at("answers").at(l));
      if (!g.accepts(x, y, a, b)) return false;
    }
    return true;
  };
  return out;
}

SyncStrategy lift_oracularizable(const SyncStrategy& s, const ExplicitGame& g,
                                 double tol) {
  g.validate();
  auto pairs = g.supported_pairs();
  for (const auto& [x, y] : pairs) {
    double res = commutation_residual(s.pvm(g.questions[x]).elems,
                                      s.pvm(g.questions[y]).elems);
    if (res > tol) {
      throw DomainError("strategy is not oracularizable on pair (" +
                        g.questions[x] + ", " + g.questions[y] +
                        "): commutation residual " + std::to_string(res));
    }
  }
  SyncStrategy out;
  out.dim = s.dim;
  for (const auto& [x, y] : pairs) {
    const PVM& px = s.pvm(g.questions[x]);
    const PVM& py = s.pvm(g.questions[y]);
    std::vector<CMatrix> elems;
    for (const auto& ea : px.elems) {
      for (const auto& eb : py.elems) {
        elems.push_back(ea * eb);
      }
    }
    out.pvms.emplace(pair_label(g.questions[x], g.questions[y]),
                     PVM{std::move(elems)});
  }
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    bool used = false;
    for (const auto& [x, y] : pairs) used = used || x == q || y == q;
    if (used) out.pvms.emplace(g.questions[q], s.pvm(g.questions[q]));
  }
  return out;
}

SyncStrategy projected_strategy(const SyncStrategy& s, const ExplicitGame& g,
                                const ProjectedBcs& p, double tol) {
  g.validate();
  if (p.single_of_question.size() != g.nq()) {
    throw DomainError("projection does not match the game's question count");
  }
  SyncStrategy out;
  out.dim = s.dim;
  CMatrix eye = CMatrix::Identity(s.dim, s.dim);
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    const Constraint& c = p.bcs.constraints[p.single_of_question[q]];
    if (c.satisfying.empty()) continue;
    const PVM& src = s.pvm(g.questions[q]);
    std::vector<CMatrix> elems;
    CMatrix sum = CMatrix::Zero(s.dim, s.dim);
    for (std::uint32_t a : c.satisfying.members()) {
      elems.push_back(src.elems.at(a));
      sum += elems.back();
    }
    if (max_abs(sum - eye) > tol) {
      throw DomainError("answers of " + g.questions[q] +
                        " outside the diagonal support carry weight");
    }
    out.pvms.emplace("c" + std::to_string(p.single_of_question[q]),
                     PVM{std::move(elems)});
  }
  for (const auto& [pair, k] : p.pair_of_questions) {
    const auto& [x, y] = pair;
    const PVM& px = s.pvm(g.questions[x]);
    const PVM& py = s.pvm(g.questions[y]);
    double res = commutation_residual(px.elems, py.elems);
    if (res > tol) {
      throw DomainError("strategy is not oracularizable on pair (" +
                        g.questions[x] + ", " + g.questions[y] +
                        "): commutation residual " + std::to_string(res));
    }
    const Constraint& c = p.bcs.constraints[k];
    std::vector<CMatrix> elems;
    CMatrix sum = CMatrix::Zero(s.dim, s.dim);
    for (std::uint32_t point : c.satisfying.members()) {
      std::uint32_t a = point >> p.h;
      std::uint32_t b = point & ((1u << p.h) - 1u);
      elems.push_back(hermitized(px.elems.at(a) * py.elems.at(b)));
      sum += elems.back();
    }
    if (max_abs(sum - eye) > tol) {
      throw DomainError("pair (" + g.questions[x] + ", " + g.questions[y] +
                        ") has winning-answer weight below one");
    }
    out.pvms.emplace("c" + std::to_string(k), PVM{std::move(elems)});
  }
  return out;
}

SyncStrategy product_strategy(const SyncStrategy& s, const ExplicitGame& g,
                              int u) {
  if (u < 1) throw DomainError("repetition count must be positive");
  if (u == 1) return s;
  std::uint64_t dim = checked_power(static_cast<std::uint64_t>(s.dim), u,
                                    kMaxDim, "product strategy dimension too large");
  auto tuples = all_tuples(static_cast<std::uint32_t>(g.nq()), u);
  SyncStrategy out;
  out.dim = static_cast<int>(dim);
  for (const auto& t : tuples) {
    bool have_all = true;
    for (std::uint32_t q : t) {
      have_all = have_all && s.pvms.count(g.questions[q]) != 0;
    }
    if (!have_all) continue;
    std::vector<CMatrix> elems = {CMatrix::Identity(1, 1)};
    for (std::uint32_t q : t) {
      const PVM& p = s.pvm(g.questions[q]);
      std::vector<CMatrix> next;
      for (const auto& prefix : elems) {
        for (const auto& e : p.elems) next.push_back(kron(prefix, e));
      }
      elems = std::move(next);
    }
    out.pvms.emplace(joined_label(g, t), PVM{std::move(elems)});
  }
  return out;
}

double repetition_bound(double v, const RepetitionParams& params) {
  if (v < 0 || v > 1) throw DomainError("value must lie in [0, 1]");
  double base = 1.0 - params.big_c * std::pow(1.0 - v, params.small_c);
  if (base < 0) base = 0;
  return std::pow(base, params.u / 2.0);
}

}  // namespace lct
