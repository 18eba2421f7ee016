#pragma once

#include <string>

#include "lct/games.hpp"

namespace lct {

struct RepetitionParams {
  int u = 1;
  double big_c = 1.0;
  double small_c = 1.0;
};

// Question label of the pair (x, y) in a projected game and the label of the
// product answer (a, b); lift_oracularizable relies on the same scheme.
std::string pair_label(const std::string& x, const std::string& y);
std::string pair_answer_label(const std::string& a, const std::string& b);

// Reroutes the mass of every supported question pair without winning
// answers onto fresh guess-the-bit questions (two first-player questions
// tagged +1/-1 and one second-player question per dead pair, winning iff
// a = b = tag).  A game without dead pairs is returned unchanged.
ExplicitGame ensure_nonempty_answers(const ExplicitGame& g);

// Projected form: the first player receives a supported question pair and
// answers for both coordinates, the second player receives one of the two
// coordinates (mass split in halves) and must match it.
ExplicitGame project(const ExplicitGame& g);

// u-fold parallel repetition with product questions, product distribution
// and the all-rounds conjunction decider.  Materialization is capped at
// 10^4 question pairs; beyond that use repeat_implicit.
ExplicitGame repeat(const ExplicitGame& g, int u);

// The same repetition exposed through the sampler/decider interface.
// Payloads: questions {"rounds": [label, ...]}, answers {"answers":
// [label, ...]}.
ImplicitGame repeat_implicit(const ExplicitGame& g, int u);

// Pair-question measurements A^{xy}_{ab} = A^x_a A^y_b for a strategy whose
// measurements commute on every supported pair (residual above tol throws);
// single-question measurements are reused.  A perfect commuting strategy
// lifts to a perfect strategy for project(g).
SyncStrategy lift_oracularizable(const SyncStrategy& s, const ExplicitGame& g,
                                 double tol = 1e-8);

// Strategy for bcs_game(p.bcs, pair_dist_matrix(p)) derived from a strategy
// for the source game g: single constraints reuse the source measurements
// restricted to diagonal-winning answers, pair constraints take commuting
// products in satisfying order.  Answers outside the constraint supports
// must carry no operator weight (residual above tol throws).
SyncStrategy projected_strategy(const SyncStrategy& s, const ExplicitGame& g,
                                const ProjectedBcs& p, double tol = 1e-8);

// Tensor-product strategy for repeat(g, u); dimension s.dim^u.
SyncStrategy product_strategy(const SyncStrategy& s, const ExplicitGame& g,
                              int u);

// (1 - C(1-v)^c)^(u/2), clamped below at 0.
double repetition_bound(double v, const RepetitionParams& params);

}  // namespace lct
