#include "lct/obsfourier.hpp"

#include <bit>

namespace lct {
namespace {

void require_family_domain(const VarSet& domain) {
  if (domain.size() > kMaxFamilyVars) {
    throw CapacityError("dense observable family over " +
                        std::to_string(domain.size()) +
                        " variables exceeds cap of " +
                        std::to_string(kMaxFamilyVars));
  }
}

void require_spectrum_domain(const VarSet& domain) {
  if (domain.size() > kMaxSpectrumVars) {
    throw CapacityError("on-demand spectrum over " +
                        std::to_string(domain.size()) +
                        " variables exceeds cap of " +
                        std::to_string(kMaxSpectrumVars));
  }
}

std::uint32_t family_size(const VarSet& domain) {
  return 1u << domain.cube_points();
}

}  // namespace

std::uint32_t fun_index(const BoolFun& f) {
  if (f.npoints() > 31) throw CapacityError("function table too wide to index");
  std::uint32_t idx = 0;
  for (std::uint32_t p = 0; p < f.npoints(); ++p) {
    if (f.value(p) == -1) idx |= 1u << p;
  }
  return idx;
}

BoolFun fun_from_index(const VarSet& domain, std::uint32_t index) {
  BoolFun f(domain);
  for (std::uint32_t p = 0; p < f.npoints(); ++p) {
    if ((index >> p) & 1u) f.set_value(p, -1);
  }
  return f;
}

std::uint32_t subset_index(const CubeSubset& s) {
  if (s.npoints() > 31) throw CapacityError("subset too wide to index");
  std::uint32_t idx = 0;
  for (std::uint32_t p = 0; p < s.npoints(); ++p) {
    if (s.test(p)) idx |= 1u << p;
  }
  return idx;
}

CubeSubset subset_from_index(const VarSet& domain, std::uint32_t index) {
  CubeSubset s{domain};
  for (std::uint32_t p = 0; p < s.npoints(); ++p) {
    if ((index >> p) & 1u) s.set(p);
  }
  return s;
}

const CMatrix& ObsFamily::at(const BoolFun& f) const {
  if (f.domain() != domain) throw DomainError("family domain mismatch");
  return obs.at(fun_index(f));
}

double ObsFamily::validity_residual() const {
  require_family_domain(domain);
  if (obs.size() != family_size(domain)) {
    throw DomainError("family has wrong member count");
  }
  double worst = 0;
  for (const auto& m : obs) {
    if (m.rows() != dim || m.cols() != dim) {
      throw DomainError("family member dimension mismatch");
    }
    worst = std::max(worst, BinaryObservable{m}.residual());
  }
  return worst;
}

ObsFamily ObsFamily::random(const VarSet& domain, int dim, RngStream& rng) {
  require_family_domain(domain);
  ObsFamily fam{domain, dim, {}};
  std::uint32_t n = family_size(domain);
  fam.obs.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    fam.obs.push_back(random_binary_observable(dim, rng));
  }
  return fam;
}

const CMatrix& ObsSpectrum::at(const CubeSubset& alpha) const {
  if (alpha.domain() != domain) throw DomainError("spectrum domain mismatch");
  return coeff.at(subset_index(alpha));
}

ObsSpectrum fourier_transform(const ObsFamily& fam) {
  require_family_domain(fam.domain);
  std::uint32_t npoints = fam.domain.cube_points();
  std::uint32_t nfuns = family_size(fam.domain);
  if (fam.obs.size() != nfuns) throw DomainError("family member count");
  ObsSpectrum spec{fam.domain, fam.dim, {}};
  spec.coeff.assign(1u << npoints, CMatrix::Zero(fam.dim, fam.dim));
  for (std::uint32_t a = 0; a < (1u << npoints); ++a) {
    CMatrix acc = CMatrix::Zero(fam.dim, fam.dim);
    for (std::uint32_t f = 0; f < nfuns; ++f) {
      // chi_alpha(f) = parity of the table bits inside alpha.
      int sign = (std::popcount(a & f) % 2 == 0) ? +1 : -1;
      acc += static_cast<double>(sign) * fam.obs[f];
    }
    spec.coeff[a] = acc / static_cast<double>(nfuns);
  }
  return spec;
}

ObsFamily inverse_transform(const ObsSpectrum& spec) {
  require_family_domain(spec.domain);
  std::uint32_t npoints = spec.domain.cube_points();
  std::uint32_t nfuns = 1u << npoints;
  if (spec.coeff.size() != nfuns) throw DomainError("spectrum size mismatch");
  ObsFamily fam{spec.domain, spec.dim, {}};
  fam.obs.assign(nfuns, CMatrix::Zero(spec.dim, spec.dim));
  for (std::uint32_t f = 0; f < nfuns; ++f) {
    CMatrix acc = CMatrix::Zero(spec.dim, spec.dim);
    for (std::uint32_t a = 0; a < nfuns; ++a) {
      int sign = (std::popcount(a & f) % 2 == 0) ? +1 : -1;
      acc += static_cast<double>(sign) * spec.coeff[a];
    }
    fam.obs[f] = acc;
  }
  return fam;
}

double parseval_residual(const ObsSpectrum& spec) {
  CMatrix sum = CMatrix::Zero(spec.dim, spec.dim);
  for (const auto& c : spec.coeff) sum += c * c;
  return max_abs(sum - CMatrix::Identity(spec.dim, spec.dim));
}

ObsFamily fold_true(const ObsFamily& fam) {
  require_family_domain(fam.domain);
  ObsFamily out{fam.domain, fam.dim, {}};
  out.obs.resize(fam.obs.size());
  for (std::uint32_t f = 0; f < fam.obs.size(); ++f) {
    BoolFun fn = fun_from_index(fam.domain, f);
    auto [s, sign] = section(fn);
    out.obs[f] = static_cast<double>(sign) * fam.obs.at(fun_index(s));
  }
  return out;
}

ObsFamily condition(const ObsFamily& fam, const BoolFun& c) {
  if (c.domain() != fam.domain) throw DomainError("constraint domain mismatch");
  ObsFamily out{fam.domain, fam.dim, {}};
  out.obs.resize(fam.obs.size());
  for (std::uint32_t f = 0; f < fam.obs.size(); ++f) {
    BoolFun fn = fun_from_index(fam.domain, f);
    out.obs[f] = fam.obs.at(fun_index(and_fold(fn, c)));
  }
  return out;
}

ObsFamily fold_and_condition(const ObsFamily& fam, const BoolFun& c,
                             SectionPolicy policy) {
  if (c.domain() != fam.domain) throw DomainError("constraint domain mismatch");
  ObsFamily out{fam.domain, fam.dim, {}};
  out.obs.resize(fam.obs.size());
  for (std::uint32_t f = 0; f < fam.obs.size(); ++f) {
    BoolFun fn = fun_from_index(fam.domain, f);
    auto [s, sign] = section_conditioned(fn, c, policy);
    out.obs[f] = static_cast<double>(sign) * fam.obs.at(fun_index(s));
  }
  return out;
}

CMatrix folded_spectrum_coeff(const VarSet& u, int dim,
                              const SectionObs& obs_of_section,
                              const CubeSubset& alpha) {
  require_spectrum_domain(u);
  if (alpha.domain() != u) throw DomainError("coefficient domain mismatch");
  if (alpha.count() % 2 == 0) return CMatrix::Zero(dim, dim);
  // E_f[chi_alpha(f) m_f B_{s(f)}] = E over sections h of chi_alpha(h) B_h.
  std::uint32_t npoints = u.cube_points();
  std::uint64_t nsection = 1ull << (npoints - 1);
  std::uint32_t amask = subset_index(alpha);
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (std::uint64_t t = 0; t < nsection; ++t) {
    // Sections have value +1 at point 0: table bit 0 clear.
    std::uint32_t table = static_cast<std::uint32_t>(t << 1);
    int sign = (std::popcount(table & amask) % 2 == 0) ? +1 : -1;
    acc += static_cast<double>(sign) *
           obs_of_section(fun_from_index(u, table));
  }
  return acc / static_cast<double>(nsection);
}

CMatrix folded_conditioned_spectrum_coeff(const VarSet& w, int dim,
                                          const BoolFun& c,
                                          SectionPolicy policy,
                                          const SectionObs& obs_of_section,
                                          const CubeSubset& beta) {
  require_spectrum_domain(w);
  if (beta.domain() != w || c.domain() != w) {
    throw DomainError("coefficient domain mismatch");
  }
  auto sat = c.support().members();
  if (sat.empty()) {
    throw DomainError("conditioning on the constant +1 constraint");
  }
  // Zero unless beta sits inside the support of C.
  for (std::uint32_t p = 0; p < beta.npoints(); ++p) {
    if (beta.test(p) && c.value(p) != -1) return CMatrix::Zero(dim, dim);
  }
  // E over value classes on the satisfied points.
  std::uint64_t nclass = 1ull << sat.size();
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (std::uint64_t cls = 0; cls < nclass; ++cls) {
    BoolFun gandc(w);  // g AND C for any g in the class
    int chi_val = 1;
    for (std::size_t k = 0; k < sat.size(); ++k) {
      bool minus = (cls >> k) & 1ull;
      if (minus) gandc.set_value(sat[k], -1);
      if (beta.test(sat[k]) && minus) chi_val = -chi_val;
    }
    auto [s, sign] = section_conditioned(gandc, c, policy);
    acc += static_cast<double>(chi_val * sign) * obs_of_section(s);
  }
  return acc / static_cast<double>(nclass);
}

std::vector<std::pair<CubeSubset, CMatrix>> folded_conditioned_spectrum(
    const VarSet& w, int dim, const BoolFun& c, SectionPolicy policy,
    const SectionObs& obs_of_section) {
  auto sat = c.support().members();
  if (sat.empty()) {
    throw DomainError("conditioning on the constant +1 constraint");
  }
  std::vector<std::pair<CubeSubset, CMatrix>> out;
  std::uint64_t nsub = 1ull << sat.size();
  for (std::uint64_t mask = 0; mask < nsub; ++mask) {
    CubeSubset beta{w};
    for (std::size_t k = 0; k < sat.size(); ++k) {
      if ((mask >> k) & 1ull) beta.set(sat[k]);
    }
    CMatrix coeff = folded_conditioned_spectrum_coeff(w, dim, c, policy,
                                                      obs_of_section, beta);
    out.emplace_back(std::move(beta), std::move(coeff));
  }
  return out;
}

std::vector<std::pair<CubeSubset, CMatrix>> folded_spectrum(
    const VarSet& u, int dim, const SectionObs& obs_of_section) {
  require_spectrum_domain(u);
  std::uint32_t npoints = u.cube_points();
  std::vector<std::pair<CubeSubset, CMatrix>> out;
  for (std::uint32_t mask = 0; mask < (1u << npoints); ++mask) {
    if (std::popcount(mask) % 2 == 0) continue;
    CubeSubset alpha = subset_from_index(u, mask);
    CMatrix coeff = folded_spectrum_coeff(u, dim, obs_of_section, alpha);
    out.emplace_back(std::move(alpha), std::move(coeff));
  }
  return out;
}

}  // namespace lct
