#pragma once

#include <string>
#include <vector>

#include "qpir/register.hpp"
#include "qpir/types.hpp"

namespace qpir {

// Density operator on an ordered list of labeled qudits, row-major like
// QuantumRegister. Construction validates Hermiticity, unit trace, and
// positive semidefiniteness (within the shared tolerances).
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, std::vector<std::string> labels,
                CMatrix matrix);

  static DensityMatrix from_pure(const QuantumRegister& reg);

  Index dim() const { return mat_.rows(); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const CMatrix& matrix() const { return mat_; }

  int axis_of(const std::string& label) const;

 private:
  void validate() const;

  std::vector<int> dims_;
  std::vector<std::string> labels_;
  CMatrix mat_;
};

// Ascending eigenvalues, clamped to [0, 1] within the PSD tolerance.
std::vector<double> density_spectrum(const DensityMatrix& rho);

// H(rho) = -Tr rho log2 rho; eigenvalues below the zero threshold contribute 0.
double von_neumann_entropy(const DensityMatrix& rho);

// (1/2)||rho - sigma||_1. Requires matching total dimension.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Reduced density operator on the listed qudits (in the given order).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<std::string>& keep);

// Purification onto (reference, system): sum_i sqrt(p_i) |i>_ref |v_i>_sys
// from the eigendecomposition of a single-qudit density operator. The
// reference dimension equals the system dimension (>= 2 for register validity).
QuantumRegister purify(const DensityMatrix& rho, const std::string& ref_label,
                       const std::string& sys_label);

// <psi| rho |psi> for a register over the same dimension list.
double state_overlap(const DensityMatrix& rho, const QuantumRegister& psi);

}  // namespace qpir
