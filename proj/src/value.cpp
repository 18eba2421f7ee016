#include "lct/value.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lct/quantum.hpp"

namespace lct {

namespace {

constexpr std::int64_t kMaxDeterministicMaps = 10'000'000;

ExplicitGame transposed(const ExplicitGame& g) {
  ExplicitGame t = ExplicitGame::with_questions(g.questions, g.answers);
  for (std::uint32_t x = 0; x < g.nq(); ++x) {
    for (std::uint32_t y = 0; y < g.nq(); ++y) {
      t.set_mass(y, x, g.mass(x, y));
    }
  }
  for (const auto& [x, y, a, b] : g.accepted) {
    t.accepted.insert({y, x, b, a});
  }
  t.provenance = g.provenance;
  return t;
}

std::int64_t mass_lcm(const ExplicitGame& g) {
  std::int64_t l = 1;
  for (std::uint32_t x = 0; x < g.nq(); ++x) {
    for (std::uint32_t y = 0; y < g.nq(); ++y) {
      std::int64_t d = g.mass(x, y).den();
      std::int64_t gg = std::gcd(l, d);
      __int128 wide = static_cast<__int128>(l / gg) * d;
      if (wide > INT64_MAX) {
        throw CapacityError("question masses have no small common denominator");
      }
      l = static_cast<std::int64_t>(wide);
    }
  }
  return l;
}

std::int64_t map_count(const ExplicitGame& g,
                       const std::vector<std::uint32_t>& side) {
  __int128 n = 1;
  for (std::uint32_t q : side) {
    n *= static_cast<__int128>(g.answers[q].size());
    if (n > kMaxDeterministicMaps) return kMaxDeterministicMaps + 1;
  }
  return static_cast<std::int64_t>(n);
}

// Exact value of `g` when Bob's deterministic maps are enumerable. For each
// Bob map the optimal Alice response decomposes per question.
Rational enumerate_col_side(const ExplicitGame& g, std::int64_t lcm) {
  std::vector<std::uint32_t> rows = g.row_questions();
  std::vector<std::uint32_t> cols = g.col_questions();

  struct Term {
    std::size_t col;
    std::int64_t weight;
    std::vector<std::uint64_t> wins;
    std::size_t nb;
  };
  std::vector<std::vector<Term>> terms(rows.size());
  for (std::size_t xi = 0; xi < rows.size(); ++xi) {
    std::uint32_t x = rows[xi];
    std::size_t na = g.answers[x].size();
    for (std::size_t yi = 0; yi < cols.size(); ++yi) {
      std::uint32_t y = cols[yi];
      Rational m = g.mass(x, y);
      if (m == Rational(0)) continue;
      Term t;
      t.col = yi;
      t.weight = (m * Rational(lcm)).num();
      t.nb = g.answers[y].size();
      t.wins.assign((na * t.nb + 63) / 64, 0);
      for (std::uint32_t a = 0; a < na; ++a) {
        for (std::uint32_t b = 0; b < t.nb; ++b) {
          if (g.accepts(x, y, a, b)) {
            std::size_t bit = a * t.nb + b;
            t.wins[bit / 64] |= std::uint64_t{1} << (bit % 64);
          }
        }
      }
      terms[xi].push_back(std::move(t));
    }
  }

  std::vector<std::uint32_t> bob(cols.size(), 0);
  std::int64_t best = 0;
  bool more = true;
  while (more) {
    std::int64_t total = 0;
    for (std::size_t xi = 0; xi < rows.size(); ++xi) {
      std::size_t na = g.answers[rows[xi]].size();
      std::int64_t row_best = 0;
      for (std::uint32_t a = 0; a < na; ++a) {
        std::int64_t score = 0;
        for (const Term& t : terms[xi]) {
          std::size_t bit = a * t.nb + bob[t.col];
          if (t.wins[bit / 64] >> (bit % 64) & 1) score += t.weight;
        }
        row_best = std::max(row_best, score);
      }
      total += row_best;
    }
    best = std::max(best, total);

    more = false;
    for (std::size_t yi = 0; yi < cols.size(); ++yi) {
      if (++bob[yi] < g.answers[cols[yi]].size()) {
        more = true;
        break;
      }
      bob[yi] = 0;
    }
  }
  return Rational(best, lcm);
}

}  // namespace

std::string to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::kExact:
      return "exact";
    case EstimateMethod::kMonteCarlo:
      return "monte_carlo";
    case EstimateMethod::kSeesaw:
      return "seesaw";
  }
  throw DomainError("unknown estimate method");
}

EstimateMethod estimate_method_from_string(const std::string& s) {
  if (s == "exact") return EstimateMethod::kExact;
  if (s == "monte_carlo") return EstimateMethod::kMonteCarlo;
  if (s == "seesaw") return EstimateMethod::kSeesaw;
  throw DomainError("unknown estimate method: " + s);
}

Rational classical_value_exact(const ExplicitGame& g) {
  g.validate();
  std::int64_t lcm = mass_lcm(g);
  std::int64_t rows = map_count(g, g.row_questions());
  std::int64_t cols = map_count(g, g.col_questions());
  if (std::min(rows, cols) > kMaxDeterministicMaps) {
    throw CapacityError("deterministic strategy spaces exceed the cap");
  }
  if (cols <= rows) return enumerate_col_side(g, lcm);
  return enumerate_col_side(transposed(g), lcm);
}

ValueEstimate classical_value(const ExplicitGame& g) {
  ValueEstimate e;
  e.point = classical_value_exact(g).to_double();
  e.radius = 0.0;
  e.samples = 0;
  e.method = EstimateMethod::kExact;
  return e;
}

ValueEstimate monte_carlo_value(const ImplicitGame& g,
                                const ImplicitStrategy& strategy,
                                std::uint64_t n, std::uint64_t seed) {
  if (n < 100) {
    throw DomainError("monte carlo estimation needs at least 100 rounds");
  }
  RngStream root(seed);
  std::uint64_t wins = 0;
  for (std::uint64_t r = 0; r < n; ++r) {
    RngStream questions = root.child(2 * r);
    RngStream answers = root.child(2 * r + 1);
    auto [qa, qb] = g.sampler(questions);
    auto [aa, ab] = strategy.respond(qa, qb, answers);
    if (g.decider(qa, qb, aa, ab)) ++wins;
  }
  double p = static_cast<double>(wins) / static_cast<double>(n);
  ValueEstimate e;
  e.point = p;
  e.radius = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  e.samples = n;
  e.method = EstimateMethod::kMonteCarlo;
  return e;
}

ImplicitStrategy uniform_bits_strategy(const ImplicitGame& g) {
  int arity_a = g.answer_arity_a;
  int arity_b = g.answer_arity_b;
  ImplicitStrategy s;
  s.respond = [arity_a, arity_b](const Payload&, const Payload&,
                                 RngStream& rng) {
    Payload aa;
    Payload ab;
    aa["bits"] = Payload::array();
    ab["bits"] = Payload::array();
    for (int i = 0; i < arity_a; ++i) {
      aa["bits"].push_back(static_cast<int>(rng.uniform_bit()));
    }
    for (int i = 0; i < arity_b; ++i) {
      ab["bits"].push_back(static_cast<int>(rng.uniform_bit()));
    }
    return std::make_pair(aa, ab);
  };
  return s;
}

namespace {

// Coefficient of each answer's projector in the objective terms that touch
// question x, with the other questions' measurements held fixed. Diagonal
// cross terms vanish for projective measurements and are omitted.
std::vector<CMatrix> reward_operators(const ExplicitGame& g,
                                      const SyncStrategy& s, std::uint32_t x) {
  int d = s.dim;
  std::size_t na = g.answers[x].size();
  std::vector<CMatrix> reward(na, CMatrix::Zero(d, d));
  for (const auto& [qx, qy, a, b] : g.accepted) {
    if (qx == x && qy == x) {
      if (a == b) {
        double m = g.mass(x, x).to_double();
        if (m != 0.0) reward[a] += m * CMatrix::Identity(d, d);
      }
      continue;
    }
    if (qx == x) {
      double m = g.mass(qx, qy).to_double();
      if (m != 0.0) reward[a] += m * s.pvm(g.questions[qy]).elems[b];
    } else if (qy == x) {
      double m = g.mass(qx, qy).to_double();
      if (m != 0.0) reward[b] += m * s.pvm(g.questions[qx]).elems[a];
    }
  }
  for (auto& r : reward) r = hermitized(r);
  return reward;
}

// Optimal reallocation of the subspace spanned by two answers' projectors:
// directions where answer a beats answer b (weakly) go to a, the rest to b.
void split_pair(std::vector<CMatrix>& elems, const CMatrix& ra,
                const CMatrix& rb, std::size_t a, std::size_t b) {
  CMatrix q = elems[a] + elems[b];
  Eigen::SelfAdjointEigenSolver<CMatrix> span(q);
  std::vector<int> keep;
  for (int i = 0; i < q.rows(); ++i) {
    if (span.eigenvalues()(i) > 0.5) keep.push_back(i);
  }
  if (keep.empty()) return;
  CMatrix v(q.rows(), static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    v.col(static_cast<int>(i)) = span.eigenvectors().col(keep[i]);
  }
  CMatrix gap = hermitized(v.adjoint() * (ra - rb) * v);
  Eigen::SelfAdjointEigenSolver<CMatrix> split(gap);
  CMatrix pa = CMatrix::Zero(q.rows(), q.cols());
  for (int i = 0; i < gap.rows(); ++i) {
    if (split.eigenvalues()(i) >= 0.0) {
      CVector dir = v * split.eigenvectors().col(i);
      pa += dir * dir.adjoint();
    }
  }
  elems[a] = hermitized(pa);
  elems[b] = hermitized(q - pa);
}

}  // namespace

SeesawResult seesaw_sync(const ExplicitGame& g, int d, int iterations,
                         std::uint64_t seed, int restarts) {
  g.validate();
  if (d < 1 || d > 8) {
    throw DomainError("see-saw dimension must be between 1 and 8");
  }
  if (iterations < 1 || restarts < 1) {
    throw DomainError("see-saw needs at least one sweep and one restart");
  }
  RngStream root(seed);
  SyncStrategy best;
  double best_value = -1.0;
  for (int run = 0; run < restarts; ++run) {
    RngStream stream = root.child(static_cast<std::uint64_t>(run));
    SyncStrategy s = random_sync_strategy(g, d, stream);
    double objective = winning_probability(g, s);
    for (int sweep = 0; sweep < iterations; ++sweep) {
      for (std::uint32_t x = 0; x < g.nq(); ++x) {
        std::vector<CMatrix> reward = reward_operators(g, s, x);
        auto& elems = s.pvms.at(g.questions[x]).elems;
        for (std::size_t a = 0; a + 1 < elems.size(); ++a) {
          for (std::size_t b = a + 1; b < elems.size(); ++b) {
            split_pair(elems, reward[a], reward[b], a, b);
          }
        }
      }
      double next = winning_probability(g, s);
      if (next < objective - 1e-9) {
        throw std::logic_error("see-saw objective decreased");
      }
      bool converged = next - objective < 1e-13;
      objective = next;
      if (converged) break;
    }
    if (objective > best_value) {
      best_value = objective;
      best = std::move(s);
    }
  }
  ValueEstimate e;
  e.point = std::clamp(winning_probability(g, best), 0.0, 1.0);
  e.radius = 0.0;
  e.samples = static_cast<std::uint64_t>(iterations);
  e.method = EstimateMethod::kSeesaw;
  return SeesawResult{std::move(best), e};
}

}  // namespace lct
