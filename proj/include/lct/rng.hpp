#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lct/rational.hpp"

namespace lct {

// Deterministic seeded random stream.  The engine is std::mt19937_64, whose
// output sequence is fixed by the standard, so equal seeds give bit-equal
// streams on every platform.  Integer draws are exact (rejection sampling);
// no implementation-defined distributions are used.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), eng_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return eng_(); }

  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

  bool uniform_bit() { return (next_u64() >> 63) != 0; }

  int uniform_sign() { return uniform_bit() ? -1 : +1; }

  // True with probability p exactly (0 <= p <= 1).
  bool bernoulli(const Rational& p);

  // Index into `weights` (nonnegative rationals, positive sum) with
  // probability weights[i] / sum, exactly.
  std::size_t pick_weighted(const std::vector<Rational>& weights);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Child stream derived from this stream's seed and an index; independent
  // of the parent's current position.
  RngStream child(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace lct
