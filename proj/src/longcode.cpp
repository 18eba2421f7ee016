#include "lct/longcode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>

#include "lct/errors.hpp"
#include "lct/transforms.hpp"

namespace lct {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string joined_names(const VarSet& v) {
  std::string s;
  for (const auto& n : v.names()) {
    s += n;
    s += ',';
  }
  return s;
}

BoolFun uniform_fun(const VarSet& domain, RngStream& rng) {
  BoolFun f(domain);
  for (std::uint32_t p = 0; p < f.npoints(); ++p) {
    if (rng.uniform_bit()) f.set_value(p, -1);
  }
  return f;
}

void check_question(const AliceQuestion& q) {
  if (q.f.domain() != q.u || q.g.domain() != q.w ||
      q.gprime.domain() != q.w || q.c.domain() != q.w) {
    throw DomainError("question functions live on the wrong domains");
  }
  if (!q.u.subset_of(q.w)) {
    throw DomainError("the member context is not inside the pair context");
  }
}

struct QuestionSections {
  std::array<BoolFun, 3> rep;
  std::array<int, 3> sign;
};

QuestionSections sections_of(const AliceQuestion& q, SectionPolicy policy) {
  check_question(q);
  auto [sf, mf] = section(q.f);
  auto [sg, mg] = section_conditioned(q.g, q.c, policy);
  auto [sp, mp] = section_conditioned(q.gprime, q.c, policy);
  return {{std::move(sf), std::move(sg), std::move(sp)}, {mf, mg, mp}};
}

int sign_of_bit(const Payload& v) {
  if (!v.is_number_integer()) throw DomainError("answer bits must be 0 or 1");
  int b = v.get<int>();
  if (b != 0 && b != 1) throw DomainError("answer bits must be 0 or 1");
  return 1 - 2 * b;
}

int bit_of_sign(int sign) { return (1 - sign) / 2; }

// Weighted pick against cumulative double weights; the last positive entry
// absorbs rounding slack.
std::size_t pick_from(const std::vector<double>& w, RngStream& rng) {
  double total = 0;
  for (double x : w) total += x;
  if (!(total > 0)) throw DomainError("joint outcome weights vanish");
  double x = rng.uniform_unit() * total;
  double acc = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0) continue;
    last = i;
    acc += w[i];
    if (x < acc) return i;
  }
  return last;
}

// Constraint indices named by the round blocks of a query domain.
std::vector<std::size_t> constraints_of_domain(const TestParams& params,
                                               const VarSet& domain) {
  std::vector<std::vector<std::string>> blocks;
  int current = -1;
  for (const auto& name : domain.names()) {
    auto colon = name.find(':');
    if (name.size() < 3 || name[0] != 'r' || colon == std::string::npos) {
      throw DomainError("query variable " + name + " lacks a round prefix");
    }
    int l;
    try {
      l = std::stoi(name.substr(1, colon - 1));
    } catch (const std::exception&) {
      throw DomainError("query variable " + name + " has a malformed round");
    }
    if (l == current + 1) {
      blocks.emplace_back();
      current = l;
    } else if (l != current) {
      throw DomainError("round blocks of a query domain must be contiguous");
    }
    blocks.back().push_back(name.substr(colon + 1));
  }
  std::vector<std::size_t> ks;
  for (const auto& block : blocks) {
    bool found = false;
    for (std::size_t k = 0; k < params.bcs.constraints.size(); ++k) {
      if (params.bcs.constraints[k].context.names() == block) {
        ks.push_back(k);
        found = true;
        break;
      }
    }
    if (!found) {
      throw DomainError("no constraint context matches a round block");
    }
  }
  return ks;
}

std::string rounds_key(
    const std::vector<std::pair<std::size_t, std::size_t>>& rounds) {
  std::string key;
  for (const auto& [i, j] : rounds) {
    key += std::to_string(i);
    key += ',';
    key += std::to_string(j);
    key += '|';
  }
  return key;
}

// Question label of a constraint tuple in the repeated game.
std::string tuple_label(
    const std::vector<std::pair<std::size_t, std::size_t>>& rounds,
    bool first) {
  std::string s;
  for (std::size_t l = 0; l < rounds.size(); ++l) {
    if (l > 0) s += "|";
    s += "c" + std::to_string(first ? rounds[l].first : rounds[l].second);
  }
  return s;
}

void check_parseval(const std::vector<std::pair<CubeSubset, CMatrix>>& spec,
                    int dim, const std::string& what) {
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& [subset, coeff] : spec) sum += coeff * coeff;
  double res = max_abs(sum - CMatrix::Identity(dim, dim));
  if (res > 1e-6) {
    throw DomainError(what + " spectrum fails completeness: residual " +
                      std::to_string(res));
  }
}

}  // namespace

void TestParams::validate() const {
  if (u < 1) throw DomainError("round count must be positive");
  bcs.validate();
  dist.validate(bcs);
  int max_ctx = 0;
  for (const auto& c : bcs.constraints) {
    if (c.satisfying.empty()) {
      throw DomainError("every constraint must have a satisfying assignment");
    }
    max_ctx = std::max(max_ctx, c.context.size());
  }
  for (std::size_t i = 0; i < bcs.constraints.size(); ++i) {
    for (std::size_t j = i + 1; j < bcs.constraints.size(); ++j) {
      if (bcs.constraints[i].context == bcs.constraints[j].context) {
        throw DomainError("constraint contexts must be pairwise distinct");
      }
    }
  }
  if (u * max_ctx > kMaxCubeVars) {
    throw CapacityError("joint context of " + std::to_string(u * max_ctx) +
                        " variables exceeds the cube cap");
  }
}

std::string round_var(int l, const std::string& name) {
  return "r" + std::to_string(l) + ":" + name;
}

TestContext make_context(const TestParams& params,
                         const std::vector<std::size_t>& entry_indices) {
  if (static_cast<int>(entry_indices.size()) != params.u) {
    throw DomainError("entry tuple size differs from the round count");
  }
  std::vector<std::string> wnames;
  std::vector<std::string> unames;
  TestContext ctx;
  for (int l = 0; l < params.u; ++l) {
    const auto& e = params.dist.entries.at(entry_indices[static_cast<std::size_t>(l)]);
    ctx.rounds.emplace_back(e.alice, e.bob);
    for (const auto& n : params.bcs.constraints[e.alice].context.names()) {
      wnames.push_back(round_var(l, n));
    }
    for (const auto& n : params.bcs.constraints[e.bob].context.names()) {
      unames.push_back(round_var(l, n));
    }
  }
  ctx.w = VarSet(wnames);
  ctx.u = VarSet(unames);
  BoolFun c = BoolFun::constant(ctx.w, -1);
  for (int l = 0; l < params.u; ++l) {
    const Constraint& pc = params.bcs.constraints[ctx.rounds[static_cast<std::size_t>(l)].first];
    std::vector<std::string> pref;
    for (const auto& n : pc.context.names()) pref.push_back(round_var(l, n));
    BoolFun local(VarSet(pref), constraint_fun(pc).table());
    c = and_fold(c, lifted(local, ctx.w));
  }
  ctx.c = std::move(c);
  return ctx;
}

std::string to_string(BobSlot s) {
  switch (s) {
    case BobSlot::kF:
      return "f";
    case BobSlot::kG:
      return "g";
    case BobSlot::kGPrime:
      return "gprime";
  }
  throw DomainError("unknown query slot");
}

BobSlot bob_slot_from_string(const std::string& s) {
  if (s == "f") return BobSlot::kF;
  if (s == "g") return BobSlot::kG;
  if (s == "gprime") return BobSlot::kGPrime;
  throw DomainError("unknown query slot: " + s);
}

std::array<BobQuestion, 3> induced_queries(const AliceQuestion& q,
                                           SectionPolicy policy) {
  QuestionSections s = sections_of(q, policy);
  return {BobQuestion{BobSlot::kF, q.u, std::move(s.rep[0])},
          BobQuestion{BobSlot::kG, q.w, std::move(s.rep[1])},
          BobQuestion{BobSlot::kGPrime, q.w, std::move(s.rep[2])}};
}

int answer_parity_rhs(const AliceQuestion& q, SectionPolicy policy) {
  QuestionSections s = sections_of(q, policy);
  return s.sign[0] * s.sign[1] * s.sign[2];
}

std::pair<AliceQuestion, BobQuestion> sample_round(const TestParams& params,
                                                   RngStream& rng) {
  std::vector<Rational> masses;
  masses.reserve(params.dist.entries.size());
  for (const auto& e : params.dist.entries) masses.push_back(e.mass);
  std::vector<std::size_t> entry_idx(static_cast<std::size_t>(params.u));
  for (auto& idx : entry_idx) idx = rng.pick_weighted(masses);
  TestContext ctx = make_context(params, entry_idx);
  AliceQuestion q;
  q.w = ctx.w;
  q.u = ctx.u;
  q.c = std::move(ctx.c);
  q.rounds = std::move(ctx.rounds);
  q.f = uniform_fun(q.u, rng);
  q.g = uniform_fun(q.w, rng);
  BoolFun mu = params.epsilon.sample(q.w, rng);
  q.gprime = lifted(q.f, q.w).times(q.g).times(mu);
  if (params.record_mu) q.mu = std::move(mu);
  auto queries = induced_queries(q, params.policy);
  std::uint64_t slot = rng.uniform_below(3);
  return {std::move(q), std::move(queries[slot])};
}

RoundVerdict decide(const AliceQuestion& alice_q, const BobQuestion& bob_q,
                    const std::array<int, 3>& a, int b, SectionPolicy policy) {
  for (int v : a) {
    if (v != 1 && v != -1) throw DomainError("answers must be +-1");
  }
  if (b != 1 && b != -1) throw DomainError("answers must be +-1");
  QuestionSections s = sections_of(alice_q, policy);
  int k = static_cast<int>(bob_q.slot);
  if (k < 0 || k > 2) throw DomainError("unknown query slot");
  const VarSet& want_domain = bob_q.slot == BobSlot::kF ? alice_q.u : alice_q.w;
  if (bob_q.domain != want_domain ||
      bob_q.fun != s.rep[static_cast<std::size_t>(k)]) {
    throw DomainError("the query does not arise from the question");
  }
  RoundVerdict v;
  v.rhs = s.sign[0] * s.sign[1] * s.sign[2];
  v.linear_ok = (a[0] * a[1] * a[2] == v.rhs);
  v.consistency_ok = (a[static_cast<std::size_t>(k)] == b);
  return v;
}

Payload alice_payload(const AliceQuestion& q) {
  Payload p;
  p["w"] = q.w.names();
  p["u"] = q.u.names();
  p["c"] = q.c.to_hex();
  p["f"] = q.f.to_hex();
  p["g"] = q.g.to_hex();
  p["gprime"] = q.gprime.to_hex();
  Payload rounds = Payload::array();
  for (const auto& [i, j] : q.rounds) {
    Payload r = Payload::array();
    r.push_back(i);
    r.push_back(j);
    rounds.push_back(std::move(r));
  }
  p["rounds"] = std::move(rounds);
  if (q.mu) p["mu"] = q.mu->to_hex();
  return p;
}

Payload bob_payload(const BobQuestion& q) {
  Payload p;
  p["slot"] = to_string(q.slot);
  p["domain"] = q.domain.names();
  p["fun"] = q.fun.to_hex();
  return p;
}

AliceQuestion alice_question_from_payload(const Payload& p) {
  AliceQuestion q;
  q.w = VarSet(p.at("w").get<std::vector<std::string>>());
  q.u = VarSet(p.at("u").get<std::vector<std::string>>());
  q.c = BoolFun::from_hex(q.w, p.at("c").get<std::string>());
  q.f = BoolFun::from_hex(q.u, p.at("f").get<std::string>());
  q.g = BoolFun::from_hex(q.w, p.at("g").get<std::string>());
  q.gprime = BoolFun::from_hex(q.w, p.at("gprime").get<std::string>());
  for (const auto& r : p.at("rounds")) {
    q.rounds.emplace_back(r.at(0).get<std::size_t>(),
                          r.at(1).get<std::size_t>());
  }
  if (p.contains("mu")) {
    q.mu = BoolFun::from_hex(q.w, p.at("mu").get<std::string>());
  }
  check_question(q);
  return q;
}

BobQuestion bob_question_from_payload(const Payload& p) {
  BobQuestion q;
  q.slot = bob_slot_from_string(p.at("slot").get<std::string>());
  q.domain = VarSet(p.at("domain").get<std::vector<std::string>>());
  q.fun = BoolFun::from_hex(q.domain, p.at("fun").get<std::string>());
  return q;
}

ImplicitGame as_implicit_game(const TestParams& params) {
  params.validate();
  ImplicitGame game;
  game.sampler = [params](RngStream& rng) {
    auto [aq, bq] = sample_round(params, rng);
    return std::make_pair(alice_payload(aq), bob_payload(bq));
  };
  game.decider = [params](const Payload& qa, const Payload& qb,
                          const Payload& aa, const Payload& ab) {
    AliceQuestion alice_q = alice_question_from_payload(qa);
    BobQuestion bob_q = bob_question_from_payload(qb);
    const auto& abits = aa.at("bits");
    if (!abits.is_array() || abits.size() != 3) {
      throw DomainError("the first answer must carry three bits");
    }
    const auto& bbits = ab.at("bits");
    if (!bbits.is_array() || bbits.size() != 1) {
      throw DomainError("the second answer must carry one bit");
    }
    std::array<int, 3> a{sign_of_bit(abits.at(0)), sign_of_bit(abits.at(1)),
                         sign_of_bit(abits.at(2))};
    return decide(alice_q, bob_q, a, sign_of_bit(bbits.at(0)), params.policy)
        .accept();
  };
  game.randomness_budget = params.u * 64 + 512;
  game.answer_arity_a = 3;
  game.answer_arity_b = 1;
  return game;
}

std::string query_variable(const BobQuestion& q) {
  return "z:" + joined_names(q.domain) + "#" + hex64(fnv1a(q.fun.to_hex()));
}

LinearView as_lcs_view(const TestParams& params) {
  params.validate();
  LinearView view;
  view.sample_equation = [params](RngStream& rng) {
    auto [aq, bq] = sample_round(params, rng);
    (void)bq;
    auto queries = induced_queries(aq, params.policy);
    LinearViewEquation eq;
    for (std::size_t k = 0; k < 3; ++k) {
      eq.vars[k] = query_variable(queries[k]);
    }
    eq.rhs = answer_parity_rhs(aq, params.policy);
    eq.degenerate = eq.vars[0] == eq.vars[1] || eq.vars[0] == eq.vars[2] ||
                    eq.vars[1] == eq.vars[2];
    return eq;
  };
  return view;
}

PairDist support_matrix(const Bcs& bcs, const ProjSupportDist& dist) {
  std::size_t m = bcs.constraints.size();
  PairDist pi(m, std::vector<Rational>(m, Rational(0)));
  for (const auto& e : dist.entries) pi[e.alice][e.bob] += e.mass;
  return pi;
}

CompletenessStrategy::CompletenessStrategy(TestParams params, SyncStrategy base)
    : params_(std::move(params)), base_(std::move(base)) {
  params_.validate();
  ExplicitGame game =
      bcs_game(params_.bcs, support_matrix(params_.bcs, params_.dist));
  double v = winning_probability(game, base_);
  if (v < 1.0 - 1e-9) {
    throw DomainError(
        "the base strategy must be perfect for the constraint game; its "
        "value is " +
        std::to_string(v));
  }
}

ImplicitStrategy CompletenessStrategy::implicit() const {
  TestParams params = params_;
  SyncStrategy base = base_;
  ImplicitStrategy s;
  s.respond = [params, base](const Payload& qa, const Payload& qb,
                             RngStream& rng) {
    AliceQuestion aq = alice_question_from_payload(qa);
    BobQuestion bq = bob_question_from_payload(qb);
    std::uint32_t phi = 0;
    std::uint32_t phi_u = 0;
    std::uint32_t psi = 0;
    for (const auto& [pair_k, member_k] : aq.rounds) {
      std::size_t kb = bq.slot == BobSlot::kF ? member_k : pair_k;
      const Constraint& ca = params.bcs.constraints.at(pair_k);
      const Constraint& cb = params.bcs.constraints.at(kb);
      const Constraint& cm = params.bcs.constraints.at(member_k);
      const PVM& pa = base.pvm("c" + std::to_string(pair_k));
      const PVM& pb = base.pvm("c" + std::to_string(kb));
      auto sat_a = ca.satisfying.members();
      auto sat_b = cb.satisfying.members();
      std::vector<double> w(sat_a.size() * sat_b.size());
      for (std::size_t ia = 0; ia < sat_a.size(); ++ia) {
        for (std::size_t ib = 0; ib < sat_b.size(); ++ib) {
          double x = (pa.elems[ia] * pb.elems[ib]).trace().real() /
                     static_cast<double>(base.dim);
          w[ia * sat_b.size() + ib] = std::max(0.0, x);
        }
      }
      std::size_t pick = pick_from(w, rng);
      std::uint32_t pta = sat_a[pick / sat_b.size()];
      std::uint32_t ptb = sat_b[pick % sat_b.size()];
      phi = (phi << ca.context.size()) | pta;
      psi = (psi << cb.context.size()) | ptb;
      std::uint32_t r = 0;
      for (int j = 0; j < cm.context.size(); ++j) {
        int pos = ca.context.index_of(cm.context.at(j));
        r = (r << 1) |
            (point_value(pta, pos, ca.context.size()) == -1 ? 1u : 0u);
      }
      phi_u = (phi_u << cm.context.size()) | r;
    }
    QuestionSections sec = sections_of(aq, params.policy);
    int a0 = sec.sign[0] * aq.f.value(phi_u);
    int a1 = sec.sign[1] * aq.g.value(phi);
    int a2 = sec.sign[2] * aq.gprime.value(phi);
    int b = bq.fun.value(psi);
    Payload aa;
    aa["bits"] = {bit_of_sign(a0), bit_of_sign(a1), bit_of_sign(a2)};
    Payload ab;
    ab["bits"] = Payload::array({bit_of_sign(b)});
    return std::make_pair(std::move(aa), std::move(ab));
  };
  return s;
}

TestObservables CompletenessStrategy::observables() const {
  std::uint64_t dim = 1;
  for (int l = 0; l < params_.u; ++l) {
    dim *= static_cast<std::uint64_t>(base_.dim);
    if (dim > kMaxDim) {
      throw CapacityError("observable dimension exceeds the cap of " +
                          std::to_string(kMaxDim));
    }
  }
  int d = static_cast<int>(dim);
  auto params = std::make_shared<TestParams>(params_);
  auto base = std::make_shared<SyncStrategy>(base_);
  using ProjList = std::vector<std::pair<std::uint32_t, CMatrix>>;
  auto cache = std::make_shared<std::map<std::string, ProjList>>();

  auto joint_projectors =
      [params, base, cache, d](
          const std::vector<std::size_t>& ks) -> const ProjList& {
    std::string key;
    for (auto k : ks) {
      key += std::to_string(k);
      key += '|';
    }
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    std::vector<std::vector<std::uint32_t>> sat;
    std::vector<const PVM*> pvms;
    for (auto k : ks) {
      sat.push_back(params->bcs.constraints.at(k).satisfying.members());
      pvms.push_back(&base->pvm("c" + std::to_string(k)));
    }
    ProjList list;
    std::vector<std::size_t> idx(ks.size(), 0);
    for (;;) {
      std::uint32_t point = 0;
      CMatrix proj = CMatrix::Identity(1, 1);
      for (std::size_t l = 0; l < ks.size(); ++l) {
        point = (point << params->bcs.constraints.at(ks[l]).context.size()) |
                sat[l][idx[l]];
        proj = kron(proj, pvms[l]->elems.at(idx[l]));
      }
      list.emplace_back(point, std::move(proj));
      std::size_t l = ks.size();
      while (l > 0) {
        if (++idx[l - 1] < sat[l - 1].size()) break;
        idx[l - 1] = 0;
        --l;
      }
      if (l == 0) break;
    }
    (void)d;
    return (*cache)[key] = std::move(list);
  };

  TestObservables obs;
  obs.dim = d;
  obs.alice = [params, joint_projectors, d](const AliceQuestion& q, int slot) {
    if (slot < 0 || slot > 2) throw DomainError("unknown answer slot");
    std::vector<std::size_t> ks;
    ks.reserve(q.rounds.size());
    for (const auto& [i, j] : q.rounds) {
      ks.push_back(i);
      (void)j;
    }
    const ProjList& list = joint_projectors(ks);
    QuestionSections sec = sections_of(q, params->policy);
    auto rmap = restriction_index_map(q.w, q.u);
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto& [point, proj] : list) {
      int sign;
      if (slot == 0) {
        sign = sec.sign[0] * q.f.value(rmap[point]);
      } else if (slot == 1) {
        sign = sec.sign[1] * q.g.value(point);
      } else {
        sign = sec.sign[2] * q.gprime.value(point);
      }
      out += static_cast<double>(sign) * proj;
    }
    return out;
  };
  obs.bob = [params, joint_projectors, d](const VarSet& domain,
                                          const BoolFun& s) {
    if (s.domain() != domain) throw DomainError("section domain mismatch");
    std::vector<std::size_t> ks = constraints_of_domain(*params, domain);
    const ProjList& list = joint_projectors(ks);
    CMatrix out = CMatrix::Zero(d, d);
    for (const auto& [point, proj] : list) {
      out += static_cast<double>(s.value(point)) * proj;
    }
    return out;
  };
  return obs;
}

TestObservables random_test_observables(const TestParams& params, int dim,
                                        std::uint64_t seed) {
  params.validate();
  if (dim < 1 || dim > kMaxDim) {
    throw DomainError("observable dimension out of range");
  }
  TestObservables obs;
  obs.dim = dim;
  obs.alice = [dim, seed](const AliceQuestion& q, int slot) {
    if (slot < 0 || slot > 2) throw DomainError("unknown answer slot");
    const BoolFun& fun = slot == 0 ? q.f : slot == 1 ? q.g : q.gprime;
    const VarSet& dom = slot == 0 ? q.u : q.w;
    std::string key = "a" + std::to_string(slot) + ":" + joined_names(dom) +
                      "#" + fun.to_hex();
    RngStream rng = RngStream(seed).child(fnv1a(key));
    return random_binary_observable(dim, rng);
  };
  obs.bob = [dim, seed](const VarSet& domain, const BoolFun& s) {
    std::string key = "b:" + joined_names(domain) + "#" + s.to_hex();
    RngStream rng = RngStream(seed).child(fnv1a(key));
    return random_binary_observable(dim, rng);
  };
  return obs;
}

std::vector<SupportTuple> support_tuples(const TestParams& params) {
  params.validate();
  std::size_t n = params.dist.entries.size();
  std::size_t total = 1;
  for (int l = 0; l < params.u; ++l) {
    if (total > kMaxSupportTuples / n) {
      throw CapacityError("support tuple count exceeds the cap of " +
                          std::to_string(kMaxSupportTuples));
    }
    total *= n;
  }
  std::vector<SupportTuple> out;
  out.reserve(total);
  std::vector<std::size_t> idx(static_cast<std::size_t>(params.u), 0);
  for (;;) {
    Rational mass(1);
    for (std::size_t i : idx) mass = mass * params.dist.entries[i].mass;
    out.push_back({idx, mass});
    std::size_t l = idx.size();
    while (l > 0) {
      if (++idx[l - 1] < n) break;
      idx[l - 1] = 0;
      --l;
    }
    if (l == 0) break;
  }
  return out;
}

ExactTestReport exact_test_report(const TestParams& params,
                                  const TestObservables& obs) {
  params.validate();
  auto tuples = support_tuples(params);
  int d = obs.dim;
  bool dim1 = (d == 1);
  ExactTestReport rep;
  Rational value_exact(0);
  Rational linear_exact(0);
  for (const auto& tuple : tuples) {
    TestContext ctx = make_context(params, tuple.entries);
    if (ctx.w.size() > kMaxExactVars) {
      throw CapacityError("exact evaluation is limited to joint contexts of " +
                          std::to_string(kMaxExactVars) + " variables");
    }
    auto fs = enumerate_functions(ctx.u);
    auto gs = enumerate_functions(ctx.w);
    auto mus = enumerate_functions(ctx.w);
    const Rational& eps = params.epsilon.eps;
    Rational complement = Rational(1) - eps;
    std::vector<Rational> mu_weight;
    mu_weight.reserve(mus.size());
    for (const auto& mu : mus) {
      Rational wt(1);
      for (std::uint32_t p = 0; p < mu.npoints(); ++p) {
        wt = wt * (mu.value(p) == -1 ? eps : complement);
      }
      mu_weight.push_back(wt);
    }
    Rational fun_share(1, static_cast<std::int64_t>(fs.size()) *
                              static_cast<std::int64_t>(gs.size()));
    for (const auto& f : fs) {
      BoolFun f_lift = lifted(f, ctx.w);
      for (const auto& g : gs) {
        BoolFun fg = f_lift.times(g);
        for (std::size_t mi = 0; mi < mus.size(); ++mi) {
          if (mu_weight[mi] == Rational(0)) continue;
          AliceQuestion q;
          q.w = ctx.w;
          q.u = ctx.u;
          q.c = ctx.c;
          q.f = f;
          q.g = g;
          q.gprime = fg.times(mus[mi]);
          q.rounds = ctx.rounds;
          auto queries = induced_queries(q, params.policy);
          int rhs = answer_parity_rhs(q, params.policy);
          std::array<CMatrix, 3> amats{obs.alice(q, 0), obs.alice(q, 1),
                                       obs.alice(q, 2)};
          CMatrix aaa = amats[0] * amats[1] * amats[2];
          std::array<CMatrix, 3> bmats;
          for (std::size_t k = 0; k < 3; ++k) {
            bmats[k] = obs.bob(queries[k].domain, queries[k].fun);
          }
          double t1 = aaa.trace().real() / d;
          double trip =
              rhs * (bmats[0] * bmats[1] * bmats[2]).trace().real() / d;
          Rational wt = tuple.mass * fun_share * mu_weight[mi];
          double wtd = wt.to_double();
          rep.linear_value += wtd * (1.0 + rhs * t1) / 2.0;
          rep.triple_trace += wtd * trip;
          double acc = 0;
          for (std::size_t k = 0; k < 3; ++k) {
            double t2 = (amats[k] * bmats[k]).trace().real() / d;
            double t3 = (aaa * amats[k] * bmats[k]).trace().real() / d;
            acc += (1.0 + rhs * t1 + t2 + rhs * t3) / 4.0;
          }
          rep.value += wtd * acc / 3.0;
          if (dim1) {
            std::array<int, 3> ia;
            std::array<int, 3> ib;
            for (std::size_t k = 0; k < 3; ++k) {
              ia[k] = amats[k](0, 0).real() >= 0 ? 1 : -1;
              ib[k] = bmats[k](0, 0).real() >= 0 ? 1 : -1;
            }
            bool lin_ok = (ia[0] * ia[1] * ia[2] == rhs);
            if (lin_ok) {
              linear_exact += wt;
              int wins = 0;
              for (std::size_t k = 0; k < 3; ++k) {
                if (ia[k] == ib[k]) ++wins;
              }
              value_exact += wt * Rational(wins, 3);
            }
          }
        }
      }
    }
  }
  if (dim1) {
    rep.value_exact = value_exact;
    rep.linear_value_exact = linear_exact;
  }
  return rep;
}

TripleSpectra bob_spectra(const TestParams& params, const TestObservables& obs,
                          const std::vector<std::size_t>& entry_indices) {
  params.validate();
  TestContext ctx = make_context(params, entry_indices);
  TripleSpectra sp;
  sp.w = ctx.w;
  sp.u = ctx.u;
  sp.c = ctx.c;
  sp.dim = obs.dim;
  sp.rounds = ctx.rounds;
  sp.u_spec = folded_spectrum(
      sp.u, obs.dim, [&](const BoolFun& s) { return obs.bob(sp.u, s); });
  sp.w_spec = folded_conditioned_spectrum(
      sp.w, obs.dim, sp.c, params.policy,
      [&](const BoolFun& s) { return obs.bob(sp.w, s); });
  return sp;
}

double exact_bias_fourier(const TripleSpectra& spectra,
                          const Rational& epsilon) {
  std::map<std::uint32_t, const CMatrix*> by_alpha;
  for (const auto& [alpha, coeff] : spectra.u_spec) {
    by_alpha[subset_index(alpha)] = &coeff;
  }
  double shrink = 1.0 - 2.0 * epsilon.to_double();
  double total = 0;
  for (const auto& [beta, coeff] : spectra.w_spec) {
    if (beta.count() == 0) continue;
    CubeSubset alpha = pi2(beta, spectra.u);
    auto it = by_alpha.find(subset_index(alpha));
    if (it == by_alpha.end()) continue;
    double scale = std::pow(shrink, static_cast<double>(beta.count()));
    total += scale * ((*it->second) * coeff * coeff).trace().real() /
             spectra.dim;
  }
  return total;
}

ParallelExtraction extract_parallel_strategy(
    const TestParams& params, const std::vector<TripleSpectra>& spectra) {
  params.validate();
  if (spectra.empty()) throw DomainError("no spectra supplied");
  auto tuples = support_tuples(params);
  std::map<std::string, const TripleSpectra*> by_rounds;
  for (const auto& sp : spectra) by_rounds[rounds_key(sp.rounds)] = &sp;
  ExplicitGame base_game =
      bcs_game(params.bcs, support_matrix(params.bcs, params.dist));
  ParallelExtraction out;
  out.game = repeat(base_game, params.u);
  int d = spectra.front().dim;
  GeneralStrategy strat;
  strat.dim_a = d;
  strat.dim_b = d;
  strat.state = GeneralStrategy::mes_state(d);

  // Per-round answer label of a joint cube point, or nothing when a block
  // falls outside its constraint's satisfying set.
  auto joint_answer_label =
      [&params](const std::vector<std::size_t>& ks, std::uint32_t point,
                int total_bits) -> std::optional<std::string> {
    std::string label;
    int shift = total_bits;
    for (std::size_t l = 0; l < ks.size(); ++l) {
      const Constraint& c = params.bcs.constraints.at(ks[l]);
      int nb = c.context.size();
      shift -= nb;
      std::uint32_t pt = (point >> shift) & ((1u << nb) - 1u);
      if (!c.satisfying.test(pt)) return std::nullopt;
      if (l > 0) label += "|";
      label += assignment_label(nb, pt);
    }
    return label;
  };

  double consistent = 0;
  for (const auto& tuple : tuples) {
    TestContext ctx = make_context(params, tuple.entries);
    auto it = by_rounds.find(rounds_key(ctx.rounds));
    if (it == by_rounds.end()) {
      throw DomainError("spectra do not cover every support tuple");
    }
    const TripleSpectra& sp = *it->second;
    if (sp.dim != d) throw DomainError("spectra dimensions disagree");
    check_parseval(sp.w_spec, d, "pair-side");
    check_parseval(sp.u_spec, d, "member-side");

    std::vector<std::size_t> pair_ks;
    std::vector<std::size_t> member_ks;
    for (const auto& [i, j] : ctx.rounds) {
      pair_ks.push_back(i);
      member_ks.push_back(j);
    }
    std::string alice_label = tuple_label(ctx.rounds, true);
    std::string bob_label = tuple_label(ctx.rounds, false);
    std::uint32_t aq = out.game.question_index(alice_label);
    std::uint32_t bq = out.game.question_index(bob_label);

    std::vector<CMatrix> ma(out.game.answers[aq].size(),
                            CMatrix::Zero(d, d));
    for (const auto& [beta, coeff] : sp.w_spec) {
      auto members = beta.members();
      if (members.empty()) continue;
      CMatrix sq = coeff * coeff;
      double share = 1.0 / static_cast<double>(members.size());
      for (std::uint32_t psi : members) {
        auto label = joint_answer_label(pair_ks, psi, ctx.w.size());
        if (!label) {
          throw DomainError("a conditioned subset contains an unsatisfying "
                            "assignment");
        }
        ma[out.game.answer_index(aq, *label)] += share * sq;
      }
    }
    strat.povms_a[alice_label] = std::move(ma);

    std::vector<CMatrix> mb(out.game.answers[bq].size(),
                            CMatrix::Zero(d, d));
    for (const auto& [alpha, coeff] : sp.u_spec) {
      auto members = alpha.members();
      if (members.empty()) continue;
      CMatrix sq = (coeff * coeff).transpose();
      double share = 1.0 / static_cast<double>(members.size());
      for (std::uint32_t phi : members) {
        auto label = joint_answer_label(member_ks, phi, ctx.u.size());
        std::uint32_t idx =
            label ? out.game.answer_index(bq, *label) : 0u;
        mb[idx] += share * sq;
      }
    }
    strat.povms_b[bob_label] = std::move(mb);

    auto rmap = restriction_index_map(ctx.w, ctx.u);
    double tuple_val = 0;
    for (const auto& [beta, wc] : sp.w_spec) {
      auto members_b = beta.members();
      if (members_b.empty()) continue;
      CMatrix wsq = wc * wc;
      for (const auto& [alpha, uc] : sp.u_spec) {
        auto members_a = alpha.members();
        if (members_a.empty()) continue;
        double p = (wsq * uc * uc).trace().real() / d;
        if (p <= 0) continue;
        int wins = 0;
        for (std::uint32_t psi : members_b) {
          std::uint32_t phi = rmap[psi];
          if (alpha.test(phi) &&
              joint_answer_label(member_ks, phi, ctx.u.size())) {
            ++wins;
          }
        }
        tuple_val += p * static_cast<double>(wins) /
                     static_cast<double>(members_b.size() * members_a.size());
      }
    }
    consistent += tuple.mass.to_double() * tuple_val;
  }
  out.strategy = std::move(strat);
  out.consistent_value = consistent;
  out.value = winning_probability(out.game, out.strategy);
  return out;
}

AuditReport soundness_audit(const TestParams& params,
                            const TestObservables& obs, double delta) {
  if (!(delta > 0) || !(delta < 1)) {
    throw DomainError("the slack parameter must lie in (0, 1)");
  }
  AuditReport report;
  report.epsilon = params.epsilon.eps.to_double();
  report.delta = delta;
  report.value_threshold = 1.0 - (1.0 - delta) * (1.0 - delta) / 36.0;
  report.extraction_bound = 4.0 * report.epsilon * delta * delta;

  ExactTestReport exact = exact_test_report(params, obs);
  report.test_value = exact.value;
  report.linear_value = exact.linear_value;
  report.triple_trace = exact.triple_trace;

  auto tuples = support_tuples(params);
  std::vector<TripleSpectra> spectra;
  spectra.reserve(tuples.size());
  double fourier = 0;
  for (const auto& tuple : tuples) {
    spectra.push_back(bob_spectra(params, obs, tuple.entries));
    fourier += tuple.mass.to_double() *
               exact_bias_fourier(spectra.back(), params.epsilon.eps);
  }
  report.fourier_form = fourier;

  ParallelExtraction extraction = extract_parallel_strategy(params, spectra);
  report.extracted_value = extraction.consistent_value;

  auto add_entry = [&report](const std::string& name, double lhs, double rhs) {
    InequalityEntry e;
    e.name = name;
    e.lhs = lhs;
    e.rhs = rhs;
    e.margin = rhs - lhs;
    e.pass = lhs <= rhs + 1e-9;
    report.entries.push_back(std::move(e));
  };

  add_entry("test-value-at-least-threshold", report.value_threshold,
            report.test_value);
  double beta_lin = 2.0 * report.linear_value - 1.0;
  add_entry("triple-trace-claim", std::abs(1.0 - report.triple_trace),
            std::sqrt(18.0 * std::max(0.0, 1.0 - beta_lin)));
  add_entry("fourier-matches-enumeration",
            std::abs(report.fourier_form - report.triple_trace), 1e-8);
  add_entry("fourier-form-at-least-delta", delta, report.fourier_form);
  add_entry("extracted-at-least-bound", report.extraction_bound,
            report.extracted_value);
  double worst_margin = 0;
  double worst_lhs = 0;
  double worst_rhs = 0;
  bool first = true;
  double shrink = 1.0 - 2.0 * report.epsilon;
  for (int k = 1; k <= 64; ++k) {
    double lhs = std::sqrt(4.0 * report.epsilon) *
                 std::pow(shrink, static_cast<double>(k));
    double rhs = 1.0 / std::sqrt(static_cast<double>(k));
    if (first || rhs - lhs < worst_margin) {
      worst_margin = rhs - lhs;
      worst_lhs = lhs;
      worst_rhs = rhs;
      first = false;
    }
  }
  add_entry("subset-size-scalar", worst_lhs, worst_rhs);

  report.all_pass = true;
  for (const auto& e : report.entries) report.all_pass = report.all_pass && e.pass;
  return report;
}

}  // namespace lct
