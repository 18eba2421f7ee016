#pragma once

#include <cstdint>
#include <string>

#include "lct/games.hpp"
#include "lct/rational.hpp"

namespace lct {

enum class EstimateMethod { kExact, kMonteCarlo, kSeesaw };

std::string to_string(EstimateMethod m);
EstimateMethod estimate_method_from_string(const std::string& s);

// A numeric value estimate. The radius is a 3-sigma confidence half-width;
// exact methods report radius zero.
struct ValueEstimate {
  double point = 0.0;
  double radius = 0.0;
  std::uint64_t samples = 0;
  EstimateMethod method = EstimateMethod::kExact;
};

// Exact optimum over deterministic strategy pairs. The side with the smaller
// deterministic-map count is enumerated; the other side is optimized one
// question at a time, which is exact because the objective is a sum over
// question pairs. Each side is capped at 1e7 maps.
Rational classical_value_exact(const ExplicitGame& g);
ValueEstimate classical_value(const ExplicitGame& g);

// Empirical acceptance frequency over n rounds. Round r draws questions from
// root.child(2r) and answers from root.child(2r+1), so rounds are independent
// and reproducible in any execution order.
ValueEstimate monte_carlo_value(const ImplicitGame& g,
                                const ImplicitStrategy& strategy,
                                std::uint64_t n, std::uint64_t seed);

// Answers every question with independent fair bits, in the payload schema
// used by the compiled tests: {"bits": [0/1, ...]} of the game's arity.
ImplicitStrategy uniform_bits_strategy(const ImplicitGame& g);

struct SeesawResult {
  SyncStrategy strategy;
  ValueEstimate estimate;
};

// Alternating optimization over one question's measurement at a time. Each
// update redistributes eigenspaces between answer pairs, which never lowers
// the objective; a violation beyond numeric noise throws. Runs `restarts`
// independently seeded instances and returns the best strategy found with
// its re-evaluated value.
SeesawResult seesaw_sync(const ExplicitGame& g, int d, int iterations,
                         std::uint64_t seed, int restarts = 10);

}  // namespace lct
