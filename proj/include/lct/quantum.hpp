#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "lct/boolfun.hpp"
#include "lct/errors.hpp"
#include "lct/rng.hpp"
#include "lct/tolerances.hpp"

namespace lct {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kMaxDim = 64;
// Cap for checks that materialize a d^2 x d^2 Kronecker product.
inline constexpr int kMaxKronDim = 16;

double max_abs(const CMatrix& m);
double hermiticity_residual(const CMatrix& m);
// (M + M^dagger)/2; when residual is non-null it receives the distance moved.
CMatrix hermitized(const CMatrix& m, double* residual = nullptr);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Hilbert-Schmidt inner product normalized by dimension: Tr(A^dagger B)/d.
Complex hs_inner(const CMatrix& a, const CMatrix& b);

// Hermitian involution (A = A^dagger, A^2 = I).
struct BinaryObservable {
  CMatrix m;

  int dim() const { return static_cast<int>(m.rows()); }
  // max of the hermiticity and involution residuals.
  double residual() const;
  static BinaryObservable checked(CMatrix m, double tol = kTolAlgebra);
};

// Projection-valued measure; element order is the outcome order.
struct PVM {
  std::vector<CMatrix> elems;

  int dim() const;
  int outcomes() const { return static_cast<int>(elems.size()); }
  // max over hermiticity, idempotence, pairwise orthogonality, completeness.
  double validity_residual() const;
  static PVM checked(std::vector<CMatrix> elems, double tol = kTolAlgebra);
};

// Max |[P_a, Q_b]| entry over element pairs of two measurement families.
double commutation_residual(const std::vector<CMatrix>& p,
                            const std::vector<CMatrix>& q);

// |<psi_MES| A x B |psi_MES>  -  Tr(A B^T)/d| computed by materializing the
// Kronecker product against the maximally entangled state (d <= kMaxKronDim).
double mes_identity_residual(const CMatrix& a, const CMatrix& b);

// Synchronous strategy: one PVM per question label, shared by both players
// (the second player applies transposes, which the trace formula absorbs).
struct SyncStrategy {
  int dim = 0;
  std::map<std::string, PVM> pvms;

  const PVM& pvm(const std::string& question) const;
  // Correlation p(a,b|x,y) = Re Tr(A^x_a A^y_b)/d.
  double correlation(const std::string& x, const std::string& y, int a,
                     int b) const;
  double validity_residual() const;
};

// General bipartite strategy: arbitrary shared state and per-player POVMs.
struct GeneralStrategy {
  int dim_a = 0;
  int dim_b = 0;
  CVector state;  // in C^(dim_a * dim_b), row-major pairing (i*dim_b + j)
  std::map<std::string, std::vector<CMatrix>> povms_a;
  std::map<std::string, std::vector<CMatrix>> povms_b;

  // p(a,b|x,y) = <psi| A^x_a x B^y_b |psi>.
  double correlation(const std::string& x, const std::string& y, int a,
                     int b) const;
  double validity_residual() const;

  static CVector mes_state(int dim);
};

// lhs = |Tr(Y1 Y2 Y3 - X1 X2 X3)|/d and the Cauchy-Schwarz bound
// rhs = sqrt(6 * (3 - sum_l Re Tr(Y_l X_l)/d)) for binary observables.
struct TraceGap {
  double lhs = 0;
  double rhs = 0;
};
TraceGap triple_trace_gap(const std::array<CMatrix, 3>& y,
                          const std::array<CMatrix, 3>& x);

// Signed sum of assignment-PVM elements: sum_k labels[k](var) * elems[k],
// where labels are point indices into the context cube.  When the elements
// form a complete PVM the result is a binary observable.
CMatrix observable_from_assignment_pvm(const VarSet& context,
                                       const std::vector<std::uint32_t>& labels,
                                       const std::vector<CMatrix>& elems,
                                       const std::string& var);

// Deterministic pseudo-random generators for tests and see-saw seeding.
double standard_normal(RngStream& rng);
CMatrix random_unitary(int dim, RngStream& rng);
CMatrix random_binary_observable(int dim, RngStream& rng);
// Projective measurement with outcome ranks summing to dim (ranks may be 0).
std::vector<CMatrix> random_pvm(int dim, const std::vector<int>& ranks,
                                RngStream& rng);

}  // namespace lct
