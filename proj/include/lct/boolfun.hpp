#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lct/errors.hpp"
#include "lct/rational.hpp"
#include "lct/rng.hpp"

namespace lct {

class RngStream;

// Variables are named; a cube over n variables may only be materialized for
// n <= kMaxCubeVars (2^16 points).  Function enumeration is capped harder.
inline constexpr int kMaxCubeVars = 16;
inline constexpr int kMaxEnumVars = 4;

// Ordered set of distinct variable names.  The order fixes the cube point
// indexing: a point is indexed by the big-endian integer whose bit for
// variable i is 1 iff that variable has value -1, so variable 0 is the most
// significant bit and point 0 is the all-(+1) point.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& at(int i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  bool contains(const std::string& name) const;
  int index_of(const std::string& name) const;  // DomainError when absent
  bool subset_of(const VarSet& other) const;
  bool operator==(const VarSet& o) const { return names_ == o.names_; }
  bool operator!=(const VarSet& o) const { return !(*this == o); }

  // Number of cube points 2^size; CapacityError above kMaxCubeVars.
  std::uint32_t cube_points() const;

  // Concatenation; DomainError when the parts share a name.
  static VarSet disjoint_union(const VarSet& a, const VarSet& b);

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

// One point of {+1,-1}^domain, stored as its index.
struct CubePoint {
  VarSet domain;
  std::uint32_t index = 0;

  // Value (+1/-1) of domain variable i at this point.
  int value(int i) const;
  int value_of(const std::string& name) const;
  // Restriction to a subdomain (sub must be a subset of domain).
  CubePoint restrict_to(const VarSet& sub) const;
};

// Value (+1/-1) of variable position i at point index p of an n-var cube.
inline int point_value(std::uint32_t p, int i, int n) {
  return ((p >> (n - 1 - i)) & 1u) ? -1 : +1;
}

// For each point of `domain`, the index of its restriction to `sub`.
std::vector<std::uint32_t> restriction_index_map(const VarSet& domain,
                                                 const VarSet& sub);

namespace detail {
// Bit table over the points of a cube; backs CubeSubset and BoolFun.
class BitTable {
 public:
  BitTable() = default;
  explicit BitTable(std::uint32_t npoints, bool fill = false);

  std::uint32_t npoints() const { return npoints_; }
  bool test(std::uint32_t p) const {
    return (words_[p >> 6] >> (p & 63u)) & 1u;
  }
  void set(std::uint32_t p, bool v);
  std::size_t count() const;

  BitTable and_with(const BitTable& o) const;
  BitTable xor_with(const BitTable& o) const;
  BitTable complement() const;
  std::size_t count_and(const BitTable& o) const;

  bool operator==(const BitTable& o) const {
    return npoints_ == o.npoints_ && words_ == o.words_;
  }
  // Order of the fixed-width hex serialization (most significant word first).
  bool less_than(const BitTable& o) const;

  // Lowercase hex, point 0 = least significant bit, width ceil(npoints/4).
  std::string to_hex() const;
  static BitTable from_hex(std::uint32_t npoints, const std::string& hex);

 private:
  std::uint32_t npoints_ = 0;
  std::vector<std::uint64_t> words_;
};
}  // namespace detail

// Subset of the points of {+1,-1}^domain.
class CubeSubset {
 public:
  CubeSubset() = default;
  explicit CubeSubset(VarSet domain);
  CubeSubset(VarSet domain, detail::BitTable bits);

  const VarSet& domain() const { return domain_; }
  std::uint32_t npoints() const { return bits_.npoints(); }
  bool test(std::uint32_t p) const { return bits_.test(p); }
  void set(std::uint32_t p, bool v = true) { bits_.set(p, v); }
  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.count() == 0; }
  std::vector<std::uint32_t> members() const;

  const detail::BitTable& bits() const { return bits_; }
  bool operator==(const CubeSubset& o) const {
    return domain_ == o.domain_ && bits_ == o.bits_;
  }

  std::string to_hex() const { return bits_.to_hex(); }
  static CubeSubset from_hex(const VarSet& domain, const std::string& hex);

 private:
  VarSet domain_;
  detail::BitTable bits_;
};

// Function {+1,-1}^domain -> {+1,-1}; table bit = 1 encodes value -1.
class BoolFun {
 public:
  BoolFun() = default;
  // Constant +1 function.
  explicit BoolFun(VarSet domain);
  BoolFun(VarSet domain, detail::BitTable table);

  static BoolFun constant(VarSet domain, int sign);
  // Indicator of a subset: -1 (true) exactly on members.
  static BoolFun indicator(const CubeSubset& s);

  const VarSet& domain() const { return domain_; }
  std::uint32_t npoints() const { return table_.npoints(); }
  int value(std::uint32_t p) const { return table_.test(p) ? -1 : +1; }
  void set_value(std::uint32_t p, int sign);

  BoolFun negated() const;
  // Pointwise product.
  BoolFun times(const BoolFun& o) const;
  // Points where the value is -1.
  CubeSubset support() const;

  const detail::BitTable& table() const { return table_; }
  bool operator==(const BoolFun& o) const {
    return domain_ == o.domain_ && table_ == o.table_;
  }
  bool operator!=(const BoolFun& o) const { return !(*this == o); }

  std::string to_hex() const { return table_.to_hex(); }
  static BoolFun from_hex(const VarSet& domain, const std::string& hex);

 private:
  VarSet domain_;
  detail::BitTable table_;
};

// Tie-break rule used by section_conditioned when picking the canonical
// representative of {g AND C, (-g) AND C}.
enum class SectionPolicy {
  // The table whose fixed-width hex serialization is lexicographically
  // smaller (equivalently the numerically smaller bitmask).
  kLexMinTable,
};

std::string to_string(SectionPolicy p);
SectionPolicy section_policy_from_string(const std::string& s);

// Character chi_alpha(f) = prod_{x in alpha} f(x); empty alpha gives +1.
int chi(const CubeSubset& alpha, const BoolFun& f);

// Majority value of f, ties resolved to +1 (i.e. -1 iff strictly more than
// half of the points map to -1).
int majority(const BoolFun& f);

// Projection pi_2: x is kept iff an odd number of beta's members restrict
// to x.  sub must be a subset of beta's domain.
CubeSubset pi2(const CubeSubset& beta, const VarSet& sub);

// Section of f over its domain: the representative of {f, -f} whose value
// at the all-(+1) point (index 0) is +1, together with the sign
// m(f * section) in {+1,-1} such that f == sign * section.
std::pair<BoolFun, int> section(const BoolFun& f);

// Pointwise AND in the true = -1 convention: -1 where both are -1.
BoolFun and_fold(const BoolFun& f, const BoolFun& c);

// Lift through restriction: the function on `domain` whose value at p is
// f(p restricted to f's domain).  f's domain must be a subset of `domain`.
BoolFun lifted(const BoolFun& f, const VarSet& domain);

// Canonical representative of {g AND C, (-g) AND C} under the policy and
// the sign +1 iff the representative equals g AND C.  C must not be the
// constant +1 function (otherwise the two candidates coincide).
std::pair<BoolFun, int> section_conditioned(const BoolFun& g,
                                            const BoolFun& c,
                                            SectionPolicy policy);

// Exact noise rate for the long-code test.
struct NoiseSpec {
  Rational eps;  // 0 <= eps < 1/2 (0 only for testing)

  explicit NoiseSpec(Rational e);
  // Each point independently -1 with probability eps.
  BoolFun sample(const VarSet& domain, RngStream& rng) const;
};

// All 2^(2^|domain|) functions in ascending table order; |domain| must be
// <= kMaxEnumVars.
std::vector<BoolFun> enumerate_functions(const VarSet& domain);

}  // namespace lct
