#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qpir {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Eigen::Index;

// Tolerance contract. Every approximate comparison in the library goes through
// one of these named bounds; tests pin the same values.
namespace tol {

// Unitarity of operators and normalization of register states.
inline constexpr double kUnitary = 1e-9;
inline constexpr double kNorm = 1e-9;

// Entropy values, property checks, and marginal-equality comparisons.
inline constexpr double kProperty = 1e-8;

// Quantities that cancel exactly in exact arithmetic (branch weights,
// analytically-zero trace distances, frozen oracle values).
inline constexpr double kExact = 1e-12;

// Eigenvalues below this are treated as zero (entropy, Schmidt rank,
// positive-semidefiniteness slack).
inline constexpr double kEigZero = 1e-12;

// Measurement probability vectors must sum to 1 within this before
// renormalized sampling; a worse defect is an internal error.
inline constexpr double kProbSum = 1e-10;

}  // namespace tol

}  // namespace qpir
