#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lct/games.hpp"
#include "lct/rational.hpp"

namespace lct {

// A named reference game with its known strategies and values.
struct Fixture {
  std::string name;
  ExplicitGame game;
  std::optional<Lcs> lcs;
  std::vector<Rational> equation_dist;
  std::optional<SyncStrategy> perfect;
  std::optional<SyncStrategy> quantum;
  std::optional<Rational> classical_value_ref;
  std::optional<double> quantum_value_ref;
  int answer_bits = 1;
};

std::vector<std::string> fixture_names();
Fixture fixture(const std::string& name);

// Same questions and answers with the distribution averaged over both
// orders, every accepted tuple mirrored, and equal answers accepted on the
// diagonal.
ExplicitGame symmetrized(const ExplicitGame& g);

}  // namespace lct
