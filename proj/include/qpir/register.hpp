#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qpir/rng.hpp"
#include "qpir/types.hpp"

namespace qpir {

class DensityMatrix;

// Pure state on an ordered list of labeled qudits. Amplitudes are stored
// row-major with the first qudit most significant: the basis index of digits
// (x_1, ..., x_n) on dimensions (d_1, ..., d_n) is ((x_1 d_2 + x_2) d_3 + ...).
// States are always normalized; every operation returns a new value.
class QuantumRegister {
 public:
  QuantumRegister(std::vector<int> dims, std::vector<std::string> labels,
                  CVector amplitudes);

  // |x_1 ... x_n> on the given dimensions.
  static QuantumRegister basis_state(const std::vector<int>& dims,
                                     const std::vector<std::string>& labels,
                                     const std::vector<int>& digits);

  // Single qudit holding the given (normalized) amplitudes.
  static QuantumRegister single(const CVector& amplitudes,
                                const std::string& label);

  // |I_d>> = (1/sqrt d) sum_s |s>|s> on two fresh qudits.
  static QuantumRegister max_entangled(int d, const std::string& label_a,
                                       const std::string& label_b);

  // Normalized |M>> = sum_st M_st |s>|t> / ||M||_F on two qudits; the first
  // label carries the row index. Throws if M is the zero matrix.
  static QuantumRegister vectorized(const CMatrix& m, const std::string& label_a,
                                    const std::string& label_b);

  int qudit_count() const { return static_cast<int>(dims_.size()); }
  Index total_dim() const { return amps_.size(); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const CVector& amplitudes() const { return amps_; }

  bool has_label(const std::string& label) const;
  int axis_of(const std::string& label) const;  // throws on unknown label
  int dim_of(const std::string& label) const;

  // Same state with one qudit relabeled; the new label must not collide.
  QuantumRegister renamed(const std::string& from, const std::string& to) const;

  // Matrix view of the amplitudes with the given qudits as the row index (in
  // the order given) and the remaining qudits, in register order, as the
  // column index.
  CMatrix matrix_view(const std::vector<std::string>& row_labels) const;

 private:
  void validate() const;

  std::vector<int> dims_;
  std::vector<std::string> labels_;
  CVector amps_;
};

struct BellOutcome {
  int a = 0;  // shift exponent
  int b = 0;  // clock exponent
  int d = 2;
};

struct MeasurementBranch {
  int outcome;
  double probability;
  QuantumRegister state;  // measured qudit removed
};

struct BellBranch {
  BellOutcome outcome;
  double probability;
  QuantumRegister state;  // both measured qudits removed
};

QuantumRegister tensor_product(const QuantumRegister& a,
                               const QuantumRegister& b);

// Applies a unitary to the listed qudits (in the given order, which fixes the
// operator's index convention). Throws on unknown labels, dimension mismatch,
// or a non-unitary operator.
QuantumRegister apply_operator(const QuantumRegister& reg, const CMatrix& op,
                               const std::vector<std::string>& targets);

// All computational-basis branches for one qudit, zero-probability branches
// omitted. Branch probabilities sum to 1 within the probability-sum tolerance.
std::vector<MeasurementBranch> measure_branches(const QuantumRegister& reg,
                                                const std::string& target);

// Samples a computational-basis measurement of one qudit; returns the outcome
// and the post-measurement register with that qudit removed.
std::pair<int, QuantumRegister> measure_computational(const QuantumRegister& reg,
                                                      const std::string& target,
                                                      RandomStream& rng);

// All generalized-Bell branches for a same-dimension qudit pair, measured in
// the basis (1/sqrt d)|X^a Z^b>> with the first label carrying the row index.
std::vector<BellBranch> bell_branches(const QuantumRegister& reg,
                                      const std::string& first,
                                      const std::string& second);

// Samples a generalized Bell measurement of the qudit pair (first, second).
std::pair<BellOutcome, QuantumRegister> bell_measure(const QuantumRegister& reg,
                                                     const std::string& first,
                                                     const std::string& second,
                                                     RandomStream& rng);

// Reduced density operator on the listed qudits (in the given order).
DensityMatrix partial_trace(const QuantumRegister& reg,
                            const std::vector<std::string>& keep);

Complex inner_product(const QuantumRegister& a, const QuantumRegister& b);

// |<a|b>| — insensitive to global phase. Requires identical dimension lists.
double fidelity_up_to_phase(const QuantumRegister& a, const QuantumRegister& b);

}  // namespace qpir
