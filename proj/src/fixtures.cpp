#include "lct/fixtures.hpp"

#include <cmath>
#include <utility>

#include "lct/quantum.hpp"

namespace lct {

namespace {

PVM observable_pvm(const CMatrix& obs) {
  int d = static_cast<int>(obs.rows());
  CMatrix eye = CMatrix::Identity(d, d);
  return PVM{{(eye + obs) / 2.0, (eye - obs) / 2.0}};
}

CMatrix pauli(char which) {
  CMatrix m(2, 2);
  switch (which) {
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      m = CMatrix::Identity(2, 2);
      break;
  }
  return m;
}

CMatrix two_qubit(char left, char right) {
  return kron(pauli(left), pauli(right));
}

Fixture chsh_fixture() {
  Fixture f;
  f.name = "chsh";
  f.answer_bits = 1;
  ExplicitGame g = ExplicitGame::with_questions(
      {"qa0", "qa1", "qb0", "qb1"},
      {{"0", "1"}, {"0", "1"}, {"0", "1"}, {"0", "1"}});
  for (std::uint32_t i = 0; i < 2; ++i) {
    for (std::uint32_t j = 0; j < 2; ++j) {
      g.set_mass(i, 2 + j, Rational(1, 4));
      for (std::uint32_t a = 0; a < 2; ++a) {
        for (std::uint32_t b = 0; b < 2; ++b) {
          if ((a ^ b) == (i & j)) g.accept(i, 2 + j, a, b);
        }
      }
    }
  }
  g.validate();
  g.provenance.push_back("fixture:chsh");
  f.game = std::move(g);
  f.classical_value_ref = Rational(3, 4);

  double r = 1.0 / std::sqrt(2.0);
  SyncStrategy q;
  q.dim = 2;
  q.pvms.emplace("qa0", observable_pvm(pauli('Z')));
  q.pvms.emplace("qa1", observable_pvm(pauli('X')));
  q.pvms.emplace("qb0", observable_pvm(r * (pauli('Z') + pauli('X'))));
  q.pvms.emplace("qb1", observable_pvm(r * (pauli('Z') - pauli('X'))));
  f.quantum = std::move(q);
  f.quantum_value_ref = (2.0 + std::sqrt(2.0)) / 4.0;
  return f;
}

Fixture magic_square_fixture() {
  Fixture f;
  f.name = "magic_square";
  f.answer_bits = 2;

  std::vector<std::string> vars;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      vars.push_back("m" + std::to_string(r) + std::to_string(c));
    }
  }
  std::vector<std::pair<std::vector<std::string>, int>> eqs;
  for (int r = 0; r < 3; ++r) {
    eqs.push_back({{vars[3 * r], vars[3 * r + 1], vars[3 * r + 2]}, +1});
  }
  for (int c = 0; c < 3; ++c) {
    eqs.push_back({{vars[c], vars[3 + c], vars[6 + c]}, c == 2 ? -1 : +1});
  }
  Lcs lcs = make_lcs(VarSet(vars), eqs);
  f.equation_dist.assign(6, Rational(1, 6));
  f.game = symmetrized(lcs_game(lcs, f.equation_dist));
  f.game.provenance.push_back("fixture:magic_square");
  f.classical_value_ref = Rational(17, 18);

  CMatrix grid[3][3] = {
      {two_qubit('X', 'I'), two_qubit('I', 'X'), two_qubit('X', 'X')},
      {two_qubit('I', 'Z'), two_qubit('Z', 'I'), two_qubit('Z', 'Z')},
      {two_qubit('X', 'Z'), two_qubit('Z', 'X'), two_qubit('Y', 'Y')}};

  SyncStrategy s;
  s.dim = 4;
  CMatrix eye = CMatrix::Identity(4, 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      s.pvms.emplace(vars[3 * r + c], observable_pvm(grid[r][c]));
    }
  }
  for (std::size_t i = 0; i < lcs.bcs.constraints.size(); ++i) {
    const Constraint& eq = lcs.bcs.constraints[i];
    std::vector<CMatrix> elems;
    for (std::uint32_t p : eq.satisfying.members()) {
      CMatrix proj = eye;
      for (int j = 0; j < 3; ++j) {
        int row = (i < 3) ? static_cast<int>(i) : j;
        int col = (i < 3) ? j : static_cast<int>(i) - 3;
        double sign = point_value(p, j, 3);
        proj = proj * ((eye + sign * grid[row][col]) / 2.0);
      }
      elems.push_back(hermitized(proj));
    }
    s.pvms.emplace("e" + std::to_string(i), PVM{std::move(elems)});
  }
  f.perfect = s;
  f.quantum = std::move(s);
  f.quantum_value_ref = 1.0;
  f.lcs = std::move(lcs);
  return f;
}

Fixture toy_parity_fixture() {
  Fixture f;
  f.name = "toy_parity";
  f.answer_bits = 1;
  ExplicitGame g =
      ExplicitGame::with_questions({"x", "y"}, {{"0", "1"}, {"0", "1"}});
  g.set_mass(0, 1, Rational(1, 2));
  g.set_mass(1, 0, Rational(1, 2));
  for (std::uint32_t x = 0; x < 2; ++x) {
    for (std::uint32_t y = 0; y < 2; ++y) {
      for (std::uint32_t a = 0; a < 2; ++a) g.accept(x, y, a, a);
    }
  }
  g.validate();
  g.provenance.push_back("fixture:toy_parity");
  f.game = std::move(g);
  f.lcs = make_lcs(VarSet({"x", "y"}), {{{"x", "y"}, +1}});
  f.equation_dist = {Rational(1)};
  f.classical_value_ref = Rational(1);

  SyncStrategy s;
  s.dim = 1;
  PVM zero{{CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 0.0)}};
  s.pvms.emplace("x", zero);
  s.pvms.emplace("y", zero);
  f.perfect = s;
  f.quantum = std::move(s);
  f.quantum_value_ref = 1.0;
  return f;
}

}  // namespace

ExplicitGame symmetrized(const ExplicitGame& g) {
  ExplicitGame s = ExplicitGame::with_questions(g.questions, g.answers);
  Rational half(1, 2);
  for (std::uint32_t x = 0; x < g.nq(); ++x) {
    for (std::uint32_t y = 0; y < g.nq(); ++y) {
      s.set_mass(x, y, (g.mass(x, y) + g.mass(y, x)) * half);
    }
  }
  for (const auto& [x, y, a, b] : g.accepted) {
    s.accept(x, y, a, b);
    s.accept(y, x, b, a);
  }
  for (std::uint32_t q = 0; q < g.nq(); ++q) {
    for (std::uint32_t a = 0; a < g.answers[q].size(); ++a) {
      s.accept(q, q, a, a);
    }
  }
  s.validate();
  s.provenance = g.provenance;
  s.provenance.push_back("symmetrized");
  return s;
}

std::vector<std::string> fixture_names() {
  return {"chsh", "magic_square", "toy_parity"};
}

Fixture fixture(const std::string& name) {
  if (name == "chsh") return chsh_fixture();
  if (name == "magic_square") return magic_square_fixture();
  if (name == "toy_parity") return toy_parity_fixture();
  throw DomainError("unknown fixture: " + name);
}

}  // namespace lct
