#include "lct/boolfun.hpp"

#include <algorithm>
#include <bit>

namespace lct {

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (int i = 0; i < static_cast<int>(names_.size()); ++i) {
    if (names_[i].empty()) throw DomainError("empty variable name");
    if (!index_.emplace(names_[i], i).second) {
      throw DomainError("duplicate variable name: " + names_[i]);
    }
  }
}

bool VarSet::contains(const std::string& name) const {
  return index_.count(name) != 0;
}

int VarSet::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw DomainError("unknown variable: " + name);
  return it->second;
}

bool VarSet::subset_of(const VarSet& other) const {
  for (const auto& n : names_) {
    if (!other.contains(n)) return false;
  }
  return true;
}

std::uint32_t VarSet::cube_points() const {
  if (size() > kMaxCubeVars) {
    throw CapacityError("cube over " + std::to_string(size()) +
                        " variables exceeds cap of " +
                        std::to_string(kMaxCubeVars));
  }
  return 1u << size();
}

VarSet VarSet::disjoint_union(const VarSet& a, const VarSet& b) {
  std::vector<std::string> names = a.names_;
  names.insert(names.end(), b.names_.begin(), b.names_.end());
  return VarSet(std::move(names));  // constructor rejects duplicates
}

int CubePoint::value(int i) const {
  if (i < 0 || i >= domain.size()) throw DomainError("point value index");
  return point_value(index, i, domain.size());
}

int CubePoint::value_of(const std::string& name) const {
  return value(domain.index_of(name));
}

CubePoint CubePoint::restrict_to(const VarSet& sub) const {
  std::uint32_t r = 0;
  int m = sub.size();
  for (int j = 0; j < m; ++j) {
    int v = value(domain.index_of(sub.at(j)));
    if (v == -1) r |= 1u << (m - 1 - j);
  }
  return CubePoint{sub, r};
}

std::vector<std::uint32_t> restriction_index_map(const VarSet& domain,
                                                 const VarSet& sub) {
  if (!sub.subset_of(domain)) {
    throw DomainError("restriction target is not a subdomain");
  }
  int n = domain.size();
  int m = sub.size();
  std::vector<int> pos(m);
  for (int j = 0; j < m; ++j) pos[j] = domain.index_of(sub.at(j));
  std::uint32_t np = domain.cube_points();
  std::vector<std::uint32_t> map(np);
  for (std::uint32_t p = 0; p < np; ++p) {
    std::uint32_t r = 0;
    for (int j = 0; j < m; ++j) {
      if ((p >> (n - 1 - pos[j])) & 1u) r |= 1u << (m - 1 - j);
    }
    map[p] = r;
  }
  return map;
}

namespace detail {

BitTable::BitTable(std::uint32_t npoints, bool fill) : npoints_(npoints) {
  words_.assign((npoints + 63) / 64, fill ? ~0ull : 0ull);
  if (fill && npoints % 64 != 0) {
    words_.back() &= (1ull << (npoints % 64)) - 1;
  }
}

void BitTable::set(std::uint32_t p, bool v) {
  if (p >= npoints_) throw DomainError("point index out of range");
  if (v) {
    words_[p >> 6] |= 1ull << (p & 63u);
  } else {
    words_[p >> 6] &= ~(1ull << (p & 63u));
  }
}

std::size_t BitTable::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

BitTable BitTable::and_with(const BitTable& o) const {
  if (npoints_ != o.npoints_) throw DomainError("bit table size mismatch");
  BitTable r(npoints_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    r.words_[i] = words_[i] & o.words_[i];
  }
  return r;
}

BitTable BitTable::xor_with(const BitTable& o) const {
  if (npoints_ != o.npoints_) throw DomainError("bit table size mismatch");
  BitTable r(npoints_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    r.words_[i] = words_[i] ^ o.words_[i];
  }
  return r;
}

BitTable BitTable::complement() const {
  BitTable r(npoints_);
  for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
  if (npoints_ % 64 != 0 && !r.words_.empty()) {
    r.words_.back() &= (1ull << (npoints_ % 64)) - 1;
  }
  return r;
}

std::size_t BitTable::count_and(const BitTable& o) const {
  if (npoints_ != o.npoints_) throw DomainError("bit table size mismatch");
  std::size_t c = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    c += std::popcount(words_[i] & o.words_[i]);
  }
  return c;
}

bool BitTable::less_than(const BitTable& o) const {
  if (npoints_ != o.npoints_) throw DomainError("bit table size mismatch");
  for (std::size_t i = words_.size(); i-- > 0;) {
    if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
  }
  return false;
}

std::string BitTable::to_hex() const {
  std::uint32_t digits = (npoints_ + 3) / 4;
  if (digits == 0) digits = 1;
  std::string out(digits, '0');
  static const char* kHex = "0123456789abcdef";
  for (std::uint32_t d = 0; d < digits; ++d) {
    std::uint32_t nibble = 0;
    for (std::uint32_t b = 0; b < 4; ++b) {
      std::uint32_t p = d * 4 + b;
      if (p < npoints_ && test(p)) nibble |= 1u << b;
    }
    out[digits - 1 - d] = kHex[nibble];
  }
  return out;
}

BitTable BitTable::from_hex(std::uint32_t npoints, const std::string& hex) {
  std::uint32_t digits = (npoints + 3) / 4;
  if (digits == 0) digits = 1;
  if (hex.size() != digits) {
    throw DomainError("hex table has width " + std::to_string(hex.size()) +
                      ", expected " + std::to_string(digits));
  }
  BitTable r(npoints);
  for (std::uint32_t d = 0; d < digits; ++d) {
    char c = hex[digits - 1 - d];
    std::uint32_t nibble;
    if (c >= '0' && c <= '9') {
      nibble = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nibble = 10 + (c - 'a');
    } else {
      throw DomainError(std::string("bad hex digit '") + c + "'");
    }
    for (std::uint32_t b = 0; b < 4; ++b) {
      std::uint32_t p = d * 4 + b;
      if (p >= npoints) {
        if ((nibble >> b) & 1u) throw DomainError("hex table has stray bits");
        continue;
      }
      if ((nibble >> b) & 1u) r.set(p, true);
    }
  }
  return r;
}

}  // namespace detail

CubeSubset::CubeSubset(VarSet domain)
    : domain_(std::move(domain)), bits_(domain_.cube_points()) {}

CubeSubset::CubeSubset(VarSet domain, detail::BitTable bits)
    : domain_(std::move(domain)), bits_(std::move(bits)) {
  if (bits_.npoints() != domain_.cube_points()) {
    throw DomainError("subset bit table does not match domain size");
  }
}

std::vector<std::uint32_t> CubeSubset::members() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < npoints(); ++p) {
    if (test(p)) out.push_back(p);
  }
  return out;
}

CubeSubset CubeSubset::from_hex(const VarSet& domain, const std::string& hex) {
  return CubeSubset(domain,
                    detail::BitTable::from_hex(domain.cube_points(), hex));
}

BoolFun::BoolFun(VarSet domain)
    : domain_(std::move(domain)), table_(domain_.cube_points()) {}

BoolFun::BoolFun(VarSet domain, detail::BitTable table)
    : domain_(std::move(domain)), table_(std::move(table)) {
  if (table_.npoints() != domain_.cube_points()) {
    throw DomainError("function table does not match domain size");
  }
}

BoolFun BoolFun::constant(VarSet domain, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("constant sign must be +-1");
  auto np = domain.cube_points();
  return BoolFun(std::move(domain), detail::BitTable(np, sign == -1));
}

BoolFun BoolFun::indicator(const CubeSubset& s) {
  return BoolFun(s.domain(), s.bits());
}

void BoolFun::set_value(std::uint32_t p, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("value must be +-1");
  table_.set(p, sign == -1);
}

BoolFun BoolFun::negated() const {
  return BoolFun(domain_, table_.complement());
}

BoolFun BoolFun::times(const BoolFun& o) const {
  if (domain_ != o.domain_) throw DomainError("function domain mismatch");
  return BoolFun(domain_, table_.xor_with(o.table_));
}

CubeSubset BoolFun::support() const { return CubeSubset(domain_, table_); }

BoolFun BoolFun::from_hex(const VarSet& domain, const std::string& hex) {
  return BoolFun(domain,
                 detail::BitTable::from_hex(domain.cube_points(), hex));
}

std::string to_string(SectionPolicy p) {
  switch (p) {
    case SectionPolicy::kLexMinTable:
      return "lex-min-table";
  }
  throw DomainError("unknown section policy");
}

SectionPolicy section_policy_from_string(const std::string& s) {
  if (s == "lex-min-table") return SectionPolicy::kLexMinTable;
  throw DomainError("unknown section policy: " + s);
}

int chi(const CubeSubset& alpha, const BoolFun& f) {
  if (alpha.domain() != f.domain()) {
    throw DomainError("chi: domain mismatch");
  }
  return (alpha.bits().count_and(f.table()) % 2 == 0) ? +1 : -1;
}

int majority(const BoolFun& f) {
  std::size_t minus = f.table().count();
  return (2 * minus > f.npoints()) ? -1 : +1;
}

CubeSubset pi2(const CubeSubset& beta, const VarSet& sub) {
  auto map = restriction_index_map(beta.domain(), sub);
  CubeSubset out((sub));
  for (std::uint32_t p = 0; p < beta.npoints(); ++p) {
    if (beta.test(p)) out.set(map[p], !out.test(map[p]));
  }
  return out;
}

std::pair<BoolFun, int> section(const BoolFun& f) {
  if (f.value(0) == +1) return {f, +1};
  return {f.negated(), -1};
}

BoolFun and_fold(const BoolFun& f, const BoolFun& c) {
  if (f.domain() != c.domain()) throw DomainError("and_fold: domain mismatch");
  return BoolFun(f.domain(), f.table().and_with(c.table()));
}

BoolFun lifted(const BoolFun& f, const VarSet& domain) {
  auto map = restriction_index_map(domain, f.domain());
  BoolFun out(domain);
  for (std::uint32_t p = 0; p < out.npoints(); ++p) {
    out.set_value(p, f.value(map[p]));
  }
  return out;
}

std::pair<BoolFun, int> section_conditioned(const BoolFun& g,
                                            const BoolFun& c,
                                            SectionPolicy policy) {
  if (g.domain() != c.domain()) {
    throw DomainError("section_conditioned: domain mismatch");
  }
  if (c.table().count() == 0) {
    throw DomainError("section_conditioned: constraint is constant +1");
  }
  BoolFun pos = and_fold(g, c);
  BoolFun neg = and_fold(g.negated(), c);
  switch (policy) {
    case SectionPolicy::kLexMinTable:
      if (pos.table().less_than(neg.table())) return {pos, +1};
      return {neg, -1};
  }
  throw DomainError("unknown section policy");
}

NoiseSpec::NoiseSpec(Rational e) : eps(e) {
  if (eps < Rational(0) || !(eps < Rational(1, 2))) {
    throw DomainError("noise rate must lie in [0, 1/2): " + eps.to_string());
  }
}

BoolFun NoiseSpec::sample(const VarSet& domain, RngStream& rng) const {
  BoolFun mu(domain);
  for (std::uint32_t p = 0; p < mu.npoints(); ++p) {
    if (rng.bernoulli(eps)) mu.set_value(p, -1);
  }
  return mu;
}

std::vector<BoolFun> enumerate_functions(const VarSet& domain) {
  if (domain.size() > kMaxEnumVars) {
    throw CapacityError("function enumeration over " +
                        std::to_string(domain.size()) +
                        " variables exceeds cap of " +
                        std::to_string(kMaxEnumVars));
  }
  std::uint32_t np = domain.cube_points();
  std::uint64_t total = 1ull << np;
  std::vector<BoolFun> out;
  out.reserve(total);
  for (std::uint64_t t = 0; t < total; ++t) {
    detail::BitTable table(np);
    for (std::uint32_t p = 0; p < np; ++p) {
      if ((t >> p) & 1ull) table.set(p, true);
    }
    out.emplace_back(domain, std::move(table));
  }
  return out;
}

}  // namespace lct
