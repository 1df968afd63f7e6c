#include "qpir/linalg.hpp"

#include <stdexcept>

namespace qpir {

void require_unitary(const CMatrix& m, const std::string& what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(what + ": operator is " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", not square");
  }
  if (!is_unitary(m)) {
    throw std::invalid_argument(what + ": operator is not unitary (defect " +
                                std::to_string(max_abs(
                                    (m.adjoint() * m -
                                     CMatrix::Identity(m.rows(), m.cols()))
                                        .eval())) +
                                ")");
  }
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
  return max_abs(a * b - b * a);
}

CMatrix unitary_power(const CMatrix& u, int n) {
  const Index d = u.rows();
  CMatrix base = n >= 0 ? u : CMatrix(u.adjoint());
  int e = n >= 0 ? n : -n;
  CMatrix out = CMatrix::Identity(d, d);
  while (e > 0) {
    if (e & 1) out = out * base;
    base = base * base;
    e >>= 1;
  }
  return out;
}

CVector random_state(int d, RandomStream& rng) {
  CVector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(rng.normal(), rng.normal());
  const double n = v.norm();
  if (n == 0.0) return random_state(d, rng);
  return v / n;
}

CMatrix random_unitary(int d, RandomStream& rng) {
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the distribution is Haar.
  for (int j = 0; j < d; ++j) {
    const Complex rj = r(j, j);
    const double a = std::abs(rj);
    q.col(j) *= (a > 0 ? rj / a : Complex(1, 0));
  }
  return q;
}

CMatrix random_density(int d, int rank, RandomStream& rng) {
  if (rank < 1 || rank > d) {
    throw std::invalid_argument("random_density: rank must be in [1, d]");
  }
  CMatrix a(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

}  // namespace qpir
