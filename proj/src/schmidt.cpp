#include "qpir/schmidt.hpp"

#include <cmath>
#include <stdexcept>

#include "qpir/linalg.hpp"

namespace qpir {

namespace {

// Orthonormal basis of the orthogonal complement of the columns of V
// (dB x r, orthonormal columns), via the trailing columns of a full QR.
CMatrix orthogonal_complement(const CMatrix& v) {
  const Index db = v.rows();
  const Index r = v.cols();
  if (r == db) return CMatrix(db, 0);
  Eigen::HouseholderQR<CMatrix> qr(v);
  const CMatrix q = qr.householderQ();
  return q.rightCols(db - r);
}

}  // namespace

CMatrix match_local_unitary(const QuantumRegister& target,
                            const QuantumRegister& other,
                            const std::vector<std::string>& labels_a) {
  if (target.dims() != other.dims() || target.labels() != other.labels()) {
    throw std::invalid_argument(
        "match_local_unitary: registers must share dimensions and labels");
  }
  const CMatrix m = target.matrix_view(labels_a);   // dA x dB
  const CMatrix mp = other.matrix_view(labels_a);
  const Index db = m.cols();

  const CMatrix rho_a = m * m.adjoint();
  const CMatrix rho_a_other = mp * mp.adjoint();
  const double mismatch = (rho_a - rho_a_other).cwiseAbs().maxCoeff();
  if (mismatch > tol::kProperty) {
    throw std::invalid_argument(
        "match_local_unitary: A-side marginals differ by " +
        std::to_string(mismatch) + "; no local solution exists");
  }

  // Shared Schmidt frame: expand both states over one eigenbasis of rho_A.
  // For eigenpair (p, w) the B-side vectors are f = M^T conj(w) / sqrt(p) and
  // g = M'^T conj(w) / sqrt(p); each family is orthonormal over the support.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_a);
  std::vector<Index> support;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > tol::kEigZero) support.push_back(i);
  }
  const Index r = static_cast<Index>(support.size());
  if (r > db) {
    throw std::invalid_argument(
        "match_local_unitary: Schmidt rank exceeds B-side dimension");
  }
  CMatrix f(db, r), g(db, r);
  for (Index c = 0; c < r; ++c) {
    const Index i = support[c];
    const double sp = std::sqrt(es.eigenvalues()(i));
    const CVector w = es.eigenvectors().col(i);
    f.col(c) = m.transpose() * w.conjugate() / sp;
    g.col(c) = mp.transpose() * w.conjugate() / sp;
  }

  const CMatrix f_perp = orthogonal_complement(f);
  const CMatrix g_perp = orthogonal_complement(g);
  CMatrix u = f * g.adjoint();
  if (f_perp.cols() > 0) u += f_perp * g_perp.adjoint();
  return u;
}

}  // namespace qpir
