#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lct/boolfun.hpp"
#include "lct/quantum.hpp"

namespace lct {

// Dense families index one observable per Boolean function; the count is
// 2^(2^|U|), so dense storage is capped at two variables.
inline constexpr int kMaxFamilyVars = 2;
// On-demand spectra enumerate sections of F_W; capped at four variables.
inline constexpr int kMaxSpectrumVars = 4;

// Index of a function in the ascending-table enumeration of its domain.
std::uint32_t fun_index(const BoolFun& f);
BoolFun fun_from_index(const VarSet& domain, std::uint32_t index);
// Index of a subset as a bitmask over cube points, and back.
std::uint32_t subset_index(const CubeSubset& s);
CubeSubset subset_from_index(const VarSet& domain, std::uint32_t index);

// Family of binary observables indexed by all functions over the domain.
struct ObsFamily {
  VarSet domain;
  int dim = 0;
  std::vector<CMatrix> obs;  // obs[fun_index(f)]

  const CMatrix& at(const BoolFun& f) const;
  // Worst binary-observable residual across members; checks the count.
  double validity_residual() const;

  static ObsFamily random(const VarSet& domain, int dim, RngStream& rng);
};

// Fourier coefficients indexed by subsets of the cube.
struct ObsSpectrum {
  VarSet domain;
  int dim = 0;
  std::vector<CMatrix> coeff;  // coeff[subset_index(alpha)]

  const CMatrix& at(const CubeSubset& alpha) const;
};

// A_hat_alpha = E_f[chi_alpha(f) A_f].
ObsSpectrum fourier_transform(const ObsFamily& fam);
// A_f = sum_alpha chi_alpha(f) A_hat_alpha.
ObsFamily inverse_transform(const ObsSpectrum& spec);
// |sum_alpha A_hat_alpha^2 - I|_max.
double parseval_residual(const ObsSpectrum& spec);

// Folding over true: f -> m(f * s(f)) A_{s(f)}.  The result is antisymmetric
// under negation, so even-size coefficients vanish.
ObsFamily fold_true(const ObsFamily& fam);
// Conditioning: f -> A_{f AND C}.  Coefficients containing any point where C
// is +1 (unsatisfied) vanish.
ObsFamily condition(const ObsFamily& fam, const BoolFun& c);
// Simultaneous fold and condition: f -> m_{f,C} A_{s_{f,C}}.
ObsFamily fold_and_condition(const ObsFamily& fam, const BoolFun& c,
                             SectionPolicy policy);

// Observable supplier keyed by the canonical section function of a query.
using SectionObs = std::function<CMatrix(const BoolFun& section)>;

// Coefficient at alpha of the folded family f -> m_f B_{s(f)} over F_U,
// computed as a mean over section representatives (zero for even |alpha|).
// |U| <= kMaxSpectrumVars.
CMatrix folded_spectrum_coeff(const VarSet& u, int dim,
                              const SectionObs& obs_of_section,
                              const CubeSubset& alpha);

// Coefficient at beta of the folded-and-conditioned family
// g -> m_{g,C} B_{s_{g,C}} over F_W, computed as a mean over value classes
// on the satisfied points of C (zero unless beta is inside the support).
CMatrix folded_conditioned_spectrum_coeff(const VarSet& w, int dim,
                                          const BoolFun& c,
                                          SectionPolicy policy,
                                          const SectionObs& obs_of_section,
                                          const CubeSubset& beta);

// All possibly-nonzero coefficients of the folded-and-conditioned family:
// one entry per subset of the support of C.
std::vector<std::pair<CubeSubset, CMatrix>> folded_conditioned_spectrum(
    const VarSet& w, int dim, const BoolFun& c, SectionPolicy policy,
    const SectionObs& obs_of_section);

// All possibly-nonzero coefficients of the folded family: odd subsets only.
std::vector<std::pair<CubeSubset, CMatrix>> folded_spectrum(
    const VarSet& u, int dim, const SectionObs& obs_of_section);

}  // namespace lct
