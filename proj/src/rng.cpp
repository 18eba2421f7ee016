#include "lct/rng.hpp"

#include <numeric>

#include "lct/errors.hpp"

namespace lct {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("uniform_below(0)");
  if ((bound & (bound - 1)) == 0) {
    return next_u64() & (bound - 1);
  }
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

bool RngStream::bernoulli(const Rational& p) {
  if (p.num() < 0 || p.num() > p.den()) {
    throw DomainError("bernoulli probability outside [0,1]: " + p.to_string());
  }
  if (p.num() == 0) return false;
  if (p.num() == p.den()) return true;
  return uniform_below(static_cast<std::uint64_t>(p.den())) <
         static_cast<std::uint64_t>(p.num());
}

std::size_t RngStream::pick_weighted(const std::vector<Rational>& weights) {
  if (weights.empty()) throw DomainError("pick_weighted with no weights");
  Rational total(0);
  std::int64_t lcm = 1;
  for (const auto& w : weights) {
    if (w < Rational(0)) throw DomainError("negative weight");
    total += w;
    std::int64_t g = std::gcd(lcm, w.den());
    if (lcm / g > INT64_MAX / w.den()) {
      throw DomainError("weight denominators overflow common scale");
    }
    lcm = lcm / g * w.den();
  }
  if (total.num() == 0) throw DomainError("pick_weighted with zero total");
  std::uint64_t scale_total =
      static_cast<std::uint64_t>((total * Rational(lcm)).num());
  std::uint64_t draw = uniform_below(scale_total);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += static_cast<std::uint64_t>((weights[i] * Rational(lcm)).num());
    if (draw < acc) return i;
  }
  return weights.size() - 1;
}

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(splitmix64(seed_ ^ splitmix64(index + 1)));
}

}  // namespace lct
