#pragma once

#include <cmath>
#include <stdexcept>

#include "qpir/types.hpp"

namespace qpir {

inline constexpr double kPi = 3.14159265358979323846;

// Primitive d-th root of unity omega = exp(2*pi*i/d), and its powers.
inline Complex omega_power(int d, long long e) {
  const long long r = ((e % d) + d) % d;
  return std::polar(1.0, 2.0 * kPi * static_cast<double>(r) / d);
}

// Generalized Pauli shift: X|s> = |s+1 mod d>.
inline CMatrix pauli_x(int d) {
  if (d < 2) throw std::invalid_argument("pauli_x: dimension must be >= 2");
  CMatrix x = CMatrix::Zero(d, d);
  for (int s = 0; s < d; ++s) x((s + 1) % d, s) = Complex(1, 0);
  return x;
}

// Generalized Pauli clock: Z|s> = omega^s |s>.
inline CMatrix pauli_z(int d) {
  if (d < 2) throw std::invalid_argument("pauli_z: dimension must be >= 2");
  CMatrix z = CMatrix::Zero(d, d);
  for (int s = 0; s < d; ++s) z(s, s) = omega_power(d, s);
  return z;
}

// X^a Z^b with exponents reduced mod d: entry (s, t) is [s = t+a mod d] omega^{b t}.
inline CMatrix pauli_xz(int d, int a, int b) {
  CMatrix m = CMatrix::Zero(d, d);
  const int ar = ((a % d) + d) % d;
  for (int t = 0; t < d; ++t) m((t + ar) % d, t) = omega_power(d, b * t);
  return m;
}

inline CMatrix pauli_x_power(int d, int a) { return pauli_xz(d, a, 0); }
inline CMatrix pauli_z_power(int d, int b) { return pauli_xz(d, 0, b); }

// Column-major stacking of M's entries in ket order: |M>> = sum_st M_st |s>|t>,
// laid out with the first (row) index most significant. Raw algebra value; the
// normalized register form lives on QuantumRegister::vectorized.
inline CVector vectorize(const CMatrix& m) {
  CVector v(m.rows() * m.cols());
  for (Index s = 0; s < m.rows(); ++s)
    for (Index t = 0; t < m.cols(); ++t) v(s * m.cols() + t) = m(s, t);
  return v;
}

// Inverse of vectorize for a rows*cols vector.
inline CMatrix unvectorize(const CVector& v, Index rows, Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvectorize: size mismatch");
  }
  CMatrix m(rows, cols);
  for (Index s = 0; s < rows; ++s)
    for (Index t = 0; t < cols; ++t) m(s, t) = v(s * cols + t);
  return m;
}

// Unnormalized maximally entangled vector sum_s |s>|s> = vectorize(I_d);
// the normalized register form lives on QuantumRegister::max_entangled.
inline CVector max_entangled_vector(int d) {
  return vectorize(CMatrix::Identity(d, d));
}

}  // namespace qpir
