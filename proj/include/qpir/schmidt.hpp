#pragma once

#include <string>
#include <vector>

#include "qpir/register.hpp"
#include "qpir/types.hpp"

namespace qpir {

// Given two pure states on the same qudits with identical reduced states on
// the listed A-side qudits, returns a unitary U on the remaining (B-side)
// qudits with (I_A x U) |other> = |target| up to global phase. Degenerate
// Schmidt spectra are handled by expanding both states in one shared
// eigenbasis of the common A-marginal, so the returned isometry maps Schmidt
// frame to Schmidt frame exactly; it is completed to a unitary on the
// orthogonal complement. Throws if the A-marginals differ beyond tolerance.
CMatrix match_local_unitary(const QuantumRegister& target,
                            const QuantumRegister& other,
                            const std::vector<std::string>& labels_a);

}  // namespace qpir
