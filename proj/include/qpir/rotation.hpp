#pragma once

#include <string>
#include <vector>

#include "qpir/register.hpp"
#include "qpir/types.hpp"

namespace qpir {

// Two-level rotation R_s(theta) on a d-dimensional space: the identity except
// on basis levels (s-1, s), where it acts as [[cos, -sin], [sin, cos]].
// Requires 1 <= s <= d-1.
CMatrix rotation_r(int d, int s, double theta);

// Qudit phase gate with a leading 1: diag(1, e^{i phi_1}, ..., e^{i phi_{d-1}}).
CMatrix phase_s(int d, const std::vector<double>& phis);

// Qubit phase gate in the symmetric convention: diag(e^{-i phi/2}, e^{i phi/2}).
CMatrix phase_s_qubit(double phi);

// Which phase-gate convention a parameter set uses. The two are never mixed:
// qubit parameters always carry the symmetric gate, qudit parameters the
// leading-1 gate.
enum class PhaseConvention { kQubitSymmetric, kQuditLeadingOne };

// Angles (theta^1..theta^{d-1} in [0, pi/2], phi^1..phi^{d-1} in [0, 2 pi))
// describing a pure qudit state; for the qubit convention d = 2 with a single
// (theta, phi) pair. Composition order is fixed:
//   |psi> = S(phi) R_{d-1}(theta^{d-1}) ... R_1(theta^1) |0>
// so R_1 acts first and the amplitudes are the spherical-coordinate products
// cos t1, e^{i p1} sin t1 cos t2, ..., e^{i p_{d-1}} sin t1 ... sin t_{d-1}.
struct StateParams {
  int d = 2;
  PhaseConvention convention = PhaseConvention::kQuditLeadingOne;
  std::vector<double> thetas;
  std::vector<double> phis;
};

StateParams make_qubit_params(double theta, double phi);
StateParams make_qudit_params(int d, std::vector<double> thetas,
                              std::vector<double> phis);

// The composed unitary S(phi) R_{d-1} ... R_1 for the parameter set.
CMatrix compose_unitary(const StateParams& params);

// compose_unitary applied to |0>, as a single-qudit register.
QuantumRegister compose_state(const StateParams& params,
                              const std::string& label = "M");

// Recovers parameters from a single-qudit state. The global phase is fixed so
// the first nonvanishing amplitude is real nonnegative; when a residual
// magnitude hits zero the remaining thetas and the undetermined phis are 0.
// Round trip: compose_state(decompose(psi, conv)) matches psi up to global
// phase within the norm tolerance.
StateParams decompose(const QuantumRegister& psi, PhaseConvention convention);

}  // namespace qpir
