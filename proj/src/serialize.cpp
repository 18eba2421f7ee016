#include "lct/serialize.hpp"

#include <fstream>
#include <utility>
#include <vector>

#include "lct/errors.hpp"

namespace lct {

Payload rational_json(const Rational& r) { return r.to_string(); }

Rational rational_from_json(const Payload& p) {
  if (!p.is_string()) throw DomainError("a rational must be a \"p/q\" string");
  return Rational::parse(p.get<std::string>());
}

Payload matrix_json(const CMatrix& m) {
  Payload rows = Payload::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Payload row = Payload::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(Payload::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Payload& p) {
  if (!p.is_array() || p.empty()) {
    throw DomainError("a matrix must be a nonempty array of rows");
  }
  auto nrows = static_cast<Eigen::Index>(p.size());
  auto ncols = static_cast<Eigen::Index>(p.at(0).size());
  CMatrix m(nrows, ncols);
  for (Eigen::Index i = 0; i < nrows; ++i) {
    const Payload& row = p.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != ncols) {
      throw DomainError("matrix rows must have equal length");
    }
    for (Eigen::Index j = 0; j < ncols; ++j) {
      const Payload& cell = row.at(static_cast<std::size_t>(j));
      if (!cell.is_array() || cell.size() != 2) {
        throw DomainError("matrix entries must be [re, im] pairs");
      }
      m(i, j) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

Payload game_json(const ExplicitGame& g) {
  Payload p;
  p["questions"] = g.questions;
  p["answers"] = g.answers;
  Payload dist = Payload::array();
  for (const auto& row : g.dist) {
    Payload r = Payload::array();
    for (const auto& mass : row) r.push_back(rational_json(mass));
    dist.push_back(std::move(r));
  }
  p["dist"] = std::move(dist);
  Payload decider = Payload::array();
  for (const auto& t : g.accepted) {
    decider.push_back(Payload::array({t[0], t[1], t[2], t[3]}));
  }
  p["decider"] = std::move(decider);
  p["provenance"] = g.provenance;
  return p;
}

ExplicitGame game_from_json(const Payload& p) {
  ExplicitGame g = ExplicitGame::with_questions(
      p.at("questions").get<std::vector<std::string>>(),
      p.at("answers").get<std::vector<std::vector<std::string>>>());
  const Payload& dist = p.at("dist");
  if (dist.size() != g.nq()) {
    throw DomainError("the distribution must have one row per question");
  }
  for (std::uint32_t x = 0; x < g.nq(); ++x) {
    const Payload& row = dist.at(x);
    if (row.size() != g.nq()) {
      throw DomainError("distribution rows must have one entry per question");
    }
    for (std::uint32_t y = 0; y < g.nq(); ++y) {
      g.set_mass(x, y, rational_from_json(row.at(y)));
    }
  }
  for (const Payload& t : p.at("decider")) {
    if (!t.is_array() || t.size() != 4) {
      throw DomainError("decider entries must be [x, y, a, b] tuples");
    }
    g.accept(t.at(0).get<std::uint32_t>(), t.at(1).get<std::uint32_t>(),
             t.at(2).get<std::uint32_t>(), t.at(3).get<std::uint32_t>());
  }
  if (p.contains("provenance")) {
    g.provenance = p.at("provenance").get<std::vector<std::string>>();
  }
  g.validate();
  return g;
}

Payload bcs_json(const Bcs& b) {
  Payload p;
  p["variables"] = b.variables.names();
  Payload constraints = Payload::array();
  for (const auto& c : b.constraints) {
    Payload e;
    e["context"] = c.context.names();
    e["satisfying"] = c.satisfying.to_hex();
    constraints.push_back(std::move(e));
  }
  p["constraints"] = std::move(constraints);
  return p;
}

Bcs bcs_from_json(const Payload& p) {
  Bcs b;
  b.variables = VarSet(p.at("variables").get<std::vector<std::string>>());
  for (const Payload& e : p.at("constraints")) {
    VarSet ctx(e.at("context").get<std::vector<std::string>>());
    CubeSubset sat =
        CubeSubset::from_hex(ctx, e.at("satisfying").get<std::string>());
    b.constraints.push_back({std::move(ctx), std::move(sat)});
  }
  b.validate();
  return b;
}

Payload lcs_json(const Lcs& l) {
  Payload p = bcs_json(l.bcs);
  p["parity"] = l.parity;
  return p;
}

Lcs lcs_from_json(const Payload& p) {
  Lcs l;
  l.bcs = bcs_from_json(p);
  l.parity = p.at("parity").get<std::vector<int>>();
  l.validate();
  return l;
}

Payload dist_json(const ProjSupportDist& d) {
  Payload entries = Payload::array();
  for (const auto& e : d.entries) {
    Payload x;
    x["alice"] = e.alice;
    x["bob"] = e.bob;
    x["mass"] = rational_json(e.mass);
    entries.push_back(std::move(x));
  }
  Payload p;
  p["entries"] = std::move(entries);
  return p;
}

ProjSupportDist dist_from_json(const Payload& p) {
  ProjSupportDist d;
  for (const Payload& e : p.at("entries")) {
    d.entries.push_back({e.at("alice").get<std::size_t>(),
                         e.at("bob").get<std::size_t>(),
                         rational_from_json(e.at("mass"))});
  }
  return d;
}

Payload strategy_json(const SyncStrategy& s) {
  Payload questions = Payload::object();
  for (const auto& [label, pvm] : s.pvms) {
    Payload outcomes = Payload::object();
    for (std::size_t a = 0; a < pvm.elems.size(); ++a) {
      outcomes[std::to_string(a)] = matrix_json(pvm.elems[a]);
    }
    questions[label] = std::move(outcomes);
  }
  Payload p;
  p["dim"] = s.dim;
  p["questions"] = std::move(questions);
  return p;
}

SyncStrategy strategy_from_json(const Payload& p) {
  SyncStrategy s;
  s.dim = p.at("dim").get<int>();
  for (const auto& [label, outcomes] : p.at("questions").items()) {
    std::vector<CMatrix> elems(outcomes.size());
    for (const auto& [key, mat] : outcomes.items()) {
      std::size_t a = std::stoul(key);
      if (a >= elems.size()) {
        throw DomainError("outcome indices must be 0..n-1");
      }
      elems[a] = matrix_from_json(mat);
    }
    s.pvms.emplace(label, PVM{std::move(elems)});
  }
  return s;
}

Payload estimate_json(const ValueEstimate& e) {
  Payload p;
  p["point"] = e.point;
  p["radius"] = e.radius;
  p["samples"] = e.samples;
  p["method"] = to_string(e.method);
  return p;
}

ValueEstimate estimate_from_json(const Payload& p) {
  ValueEstimate e;
  e.point = p.at("point").get<double>();
  e.radius = p.at("radius").get<double>();
  e.samples = p.at("samples").get<std::uint64_t>();
  e.method = estimate_method_from_string(p.at("method").get<std::string>());
  return e;
}

Payload params_json(const TestParams& t) {
  Payload p;
  p["epsilon"] = rational_json(t.epsilon.eps);
  p["u"] = t.u;
  p["bcs"] = bcs_json(t.bcs);
  p["dist"] = dist_json(t.dist);
  p["policy"] = to_string(t.policy);
  p["seed"] = t.seed;
  p["record_mu"] = t.record_mu;
  return p;
}

TestParams params_from_json(const Payload& p) {
  TestParams t{NoiseSpec(rational_from_json(p.at("epsilon"))),
               p.at("u").get<int>(),
               bcs_from_json(p.at("bcs")),
               dist_from_json(p.at("dist")),
               section_policy_from_string(p.at("policy").get<std::string>()),
               p.at("seed").get<std::uint64_t>(),
               p.at("record_mu").get<bool>()};
  t.validate();
  return t;
}

Payload entry_json(const InequalityEntry& e) {
  Payload p;
  p["name"] = e.name;
  p["lhs"] = e.lhs;
  p["rhs"] = e.rhs;
  p["margin"] = e.margin;
  p["pass"] = e.pass;
  return p;
}

Payload audit_json(const AuditReport& r) {
  Payload p;
  p["epsilon"] = r.epsilon;
  p["delta"] = r.delta;
  p["test_value"] = r.test_value;
  p["linear_value"] = r.linear_value;
  p["triple_trace"] = r.triple_trace;
  p["fourier_form"] = r.fourier_form;
  p["extracted_value"] = r.extracted_value;
  p["extraction_bound"] = r.extraction_bound;
  p["value_threshold"] = r.value_threshold;
  Payload entries = Payload::array();
  for (const auto& e : r.entries) entries.push_back(entry_json(e));
  p["entries"] = std::move(entries);
  p["all_pass"] = r.all_pass;
  return p;
}

Payload round_json(const TranscriptRound& r) {
  Payload p;
  p["alice_q"] = alice_payload(r.alice_q);
  p["bob_q"] = bob_payload(r.bob_q);
  Payload answers;
  answers["a"] = r.answer_a;
  answers["b"] = r.answer_b;
  p["answers"] = std::move(answers);
  Payload verdict;
  verdict["rhs"] = r.verdict.rhs;
  verdict["linear_ok"] = r.verdict.linear_ok;
  verdict["consistency_ok"] = r.verdict.consistency_ok;
  verdict["accept"] = r.verdict.accept();
  p["verdict"] = std::move(verdict);
  p["seed"] = r.seed;
  return p;
}

TranscriptRound round_from_json(const Payload& p) {
  TranscriptRound r;
  r.alice_q = alice_question_from_payload(p.at("alice_q"));
  r.bob_q = bob_question_from_payload(p.at("bob_q"));
  r.answer_a = p.at("answers").at("a");
  r.answer_b = p.at("answers").at("b");
  const Payload& v = p.at("verdict");
  r.verdict.rhs = v.at("rhs").get<int>();
  r.verdict.linear_ok = v.at("linear_ok").get<bool>();
  r.verdict.consistency_ok = v.at("consistency_ok").get<bool>();
  r.seed = p.at("seed").get<std::uint64_t>();
  return r;
}

std::string dump_canonical(const Payload& p) { return p.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Payload& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out << dump_canonical(p);
  if (!out) throw DomainError("failed to write " + path);
}

Payload read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  Payload p = Payload::parse(in, nullptr, true);
  return p;
}

}  // namespace lct
