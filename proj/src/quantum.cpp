#include "lct/quantum.hpp"

#include <cmath>

namespace lct {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const CMatrix& m) {
  return max_abs(m - m.adjoint().eval());
}

CMatrix hermitized(const CMatrix& m, double* residual) {
  CMatrix h = (m + m.adjoint().eval()) / 2.0;
  if (residual != nullptr) *residual = max_abs(m - h);
  return h;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Complex hs_inner(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DomainError("hs_inner requires equal square matrices");
  }
  return (a.adjoint() * b).trace() / static_cast<double>(a.rows());
}

double BinaryObservable::residual() const {
  CMatrix identity = CMatrix::Identity(m.rows(), m.cols());
  return std::max(hermiticity_residual(m), max_abs(m * m - identity));
}

BinaryObservable BinaryObservable::checked(CMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DomainError("observable must be square and nonempty");
  }
  if (m.rows() > kMaxDim) {
    throw CapacityError("observable dimension exceeds cap");
  }
  BinaryObservable obs{std::move(m)};
  if (obs.residual() > tol) {
    throw DomainError("matrix is not a binary observable (residual " +
                      std::to_string(obs.residual()) + ")");
  }
  return obs;
}

int PVM::dim() const {
  if (elems.empty()) throw DomainError("empty PVM");
  return static_cast<int>(elems[0].rows());
}

double PVM::validity_residual() const {
  if (elems.empty()) throw DomainError("empty PVM");
  int d = dim();
  CMatrix sum = CMatrix::Zero(d, d);
  double worst = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const CMatrix& p = elems[i];
    if (p.rows() != d || p.cols() != d) {
      throw DomainError("PVM element dimension mismatch");
    }
    worst = std::max(worst, hermiticity_residual(p));
    worst = std::max(worst, max_abs(p * p - p));
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      worst = std::max(worst, max_abs(p * elems[j]));
    }
    sum += p;
  }
  worst = std::max(worst, max_abs(sum - CMatrix::Identity(d, d)));
  return worst;
}

PVM PVM::checked(std::vector<CMatrix> elems, double tol) {
  PVM pvm{std::move(elems)};
  if (pvm.dim() > kMaxDim) throw CapacityError("PVM dimension exceeds cap");
  double r = pvm.validity_residual();
  if (r > tol) {
    throw DomainError("measurement is not a PVM (residual " +
                      std::to_string(r) + ")");
  }
  return pvm;
}

double commutation_residual(const std::vector<CMatrix>& p,
                            const std::vector<CMatrix>& q) {
  double worst = 0;
  for (const auto& a : p) {
    for (const auto& b : q) {
      worst = std::max(worst, max_abs(a * b - b * a));
    }
  }
  return worst;
}

double mes_identity_residual(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DomainError("mes identity requires equal square matrices");
  }
  int d = static_cast<int>(a.rows());
  if (d > kMaxKronDim) {
    throw CapacityError("mes identity check materializes d^2 x d^2; d cap is " +
                        std::to_string(kMaxKronDim));
  }
  CVector psi = GeneralStrategy::mes_state(d);
  CMatrix both = kron(a, b);
  Complex lhs = psi.dot(both * psi);  // Eigen dot conjugates the left side
  Complex rhs = (a * b.transpose()).trace() / static_cast<double>(d);
  return std::abs(lhs - rhs);
}

const PVM& SyncStrategy::pvm(const std::string& question) const {
  auto it = pvms.find(question);
  if (it == pvms.end()) {
    throw DomainError("strategy has no PVM for question " + question);
  }
  return it->second;
}

double SyncStrategy::correlation(const std::string& x, const std::string& y,
                                 int a, int b) const {
  const CMatrix& pa = pvm(x).elems.at(a);
  const CMatrix& pb = pvm(y).elems.at(b);
  return ((pa * pb).trace() / static_cast<double>(dim)).real();
}

double SyncStrategy::validity_residual() const {
  double worst = 0;
  for (const auto& [q, p] : pvms) {
    if (p.dim() != dim) throw DomainError("PVM dim mismatch at " + q);
    worst = std::max(worst, p.validity_residual());
  }
  return worst;
}

double GeneralStrategy::correlation(const std::string& x, const std::string& y,
                                    int a, int b) const {
  auto ita = povms_a.find(x);
  auto itb = povms_b.find(y);
  if (ita == povms_a.end() || itb == povms_b.end()) {
    throw DomainError("strategy is missing a POVM for a question");
  }
  const CMatrix& ea = ita->second.at(a);
  const CMatrix& eb = itb->second.at(b);
  // <psi| A x B |psi> = Tr(M^dagger A M B^T) with M the dA x dB reshaping.
  Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      m(state.data(), dim_a, dim_b);
  CMatrix mm = m;
  return (mm.adjoint() * ea * mm * eb.transpose()).trace().real();
}

double GeneralStrategy::validity_residual() const {
  double worst = 0;
  worst = std::max(worst, std::abs(state.norm() - 1.0));
  auto check_side = [&](const std::map<std::string, std::vector<CMatrix>>& ps,
                        int d) {
    for (const auto& [q, elems] : ps) {
      CMatrix sum = CMatrix::Zero(d, d);
      for (const auto& e : elems) {
        if (e.rows() != d || e.cols() != d) {
          throw DomainError("POVM element dim mismatch at " + q);
        }
        worst = std::max(worst, hermiticity_residual(e));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitized(e));
        if (es.info() == Eigen::Success && es.eigenvalues().size() > 0) {
          worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff()));
        }
        sum += e;
      }
      worst = std::max(worst, max_abs(sum - CMatrix::Identity(d, d)));
    }
  };
  check_side(povms_a, dim_a);
  check_side(povms_b, dim_b);
  return worst;
}

CVector GeneralStrategy::mes_state(int dim) {
  CVector psi = CVector::Zero(dim * dim);
  double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int i = 0; i < dim; ++i) psi(i * dim + i) = amp;
  return psi;
}

TraceGap triple_trace_gap(const std::array<CMatrix, 3>& y,
                          const std::array<CMatrix, 3>& x) {
  int d = static_cast<int>(y[0].rows());
  TraceGap gap;
  Complex diff =
      ((y[0] * y[1] * y[2]).trace() - (x[0] * x[1] * x[2]).trace()) /
      static_cast<double>(d);
  gap.lhs = std::abs(diff);
  double overlap = 0;
  for (int l = 0; l < 3; ++l) {
    overlap += ((y[l] * x[l]).trace() / static_cast<double>(d)).real();
  }
  gap.rhs = std::sqrt(std::max(0.0, 6.0 * (3.0 - overlap)));
  return gap;
}

CMatrix observable_from_assignment_pvm(const VarSet& context,
                                       const std::vector<std::uint32_t>& labels,
                                       const std::vector<CMatrix>& elems,
                                       const std::string& var) {
  if (labels.size() != elems.size()) {
    throw DomainError("assignment PVM labels/elements mismatch");
  }
  if (elems.empty()) throw DomainError("assignment PVM is empty");
  int pos = context.index_of(var);
  int n = context.size();
  CMatrix out = CMatrix::Zero(elems[0].rows(), elems[0].cols());
  for (std::size_t k = 0; k < elems.size(); ++k) {
    out += static_cast<double>(point_value(labels[k], pos, n)) * elems[k];
  }
  return out;
}

double standard_normal(RngStream& rng) {
  // Box-Muller on exact-bit uniforms keeps the stream deterministic.
  double u1;
  do {
    u1 = rng.uniform_unit();
  } while (u1 <= 0.0);
  double u2 = rng.uniform_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

CMatrix random_unitary(int dim, RngStream& rng) {
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      g(i, j) = Complex(standard_normal(rng), standard_normal(rng));
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase convention so the factorization is unique.
  for (int i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    Complex phase = (std::abs(d) > 0) ? d / std::abs(d) : Complex(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

CMatrix random_binary_observable(int dim, RngStream& rng) {
  CMatrix u = random_unitary(dim, rng);
  CMatrix d = CMatrix::Zero(dim, dim);
  bool saw_plus = false, saw_minus = false;
  for (int i = 0; i < dim; ++i) {
    int s = rng.uniform_sign();
    if (s > 0) saw_plus = true;
    else saw_minus = true;
    d(i, i) = static_cast<double>(s);
  }
  // Keep both eigenvalues present so the observable is never +-I.
  if (!saw_plus) d(0, 0) = 1.0;
  if (!saw_minus) d(0, 0) = -1.0;
  return u * d * u.adjoint();
}

std::vector<CMatrix> random_pvm(int dim, const std::vector<int>& ranks,
                                RngStream& rng) {
  int total = 0;
  for (int r : ranks) {
    if (r < 0) throw DomainError("negative PVM rank");
    total += r;
  }
  if (total != dim) throw DomainError("PVM ranks must sum to dim");
  CMatrix u = random_unitary(dim, rng);
  std::vector<CMatrix> out;
  int col = 0;
  for (int r : ranks) {
    CMatrix p = CMatrix::Zero(dim, dim);
    for (int k = 0; k < r; ++k, ++col) {
      p += u.col(col) * u.col(col).adjoint();
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace lct
