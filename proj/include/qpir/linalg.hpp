#pragma once

#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "qpir/rng.hpp"
#include "qpir/types.hpp"

namespace qpir {

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline CVector kron(const CVector& a, const CVector& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

inline double max_abs(const CMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

inline bool is_unitary(const CMatrix& m, double tolerance = tol::kUnitary) {
  if (m.rows() != m.cols()) return false;
  const CMatrix defect =
      m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
  return max_abs(defect) <= tolerance;
}

void require_unitary(const CMatrix& m, const std::string& what);

// Largest entry magnitude of the commutator [a, b]; zero for a commuting pair.
double commutator_norm(const CMatrix& a, const CMatrix& b);

// Integer matrix power of a unitary; negative exponents use the adjoint.
CMatrix unitary_power(const CMatrix& u, int n);

// Gaussian-ensemble samplers. States are uniform on the sphere, unitaries are
// Haar (QR of a Ginibre matrix with the phase convention fixed), densities are
// normalized Wishart matrices of the requested rank.
CVector random_state(int d, RandomStream& rng);
CMatrix random_unitary(int d, RandomStream& rng);
CMatrix random_density(int d, int rank, RandomStream& rng);

}  // namespace qpir
