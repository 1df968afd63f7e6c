#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qpir/linalg.hpp"
#include "qpir/pauli.hpp"
#include "qpir/rotation.hpp"

using namespace qpir;

TEST_CASE("rotation_r embeds a Givens block at the requested levels") {
  const CMatrix quarter = rotation_r(2, 1, kPi / 2);
  CMatrix expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK(max_abs((quarter - expected).eval()) < 1e-15);

  const CMatrix r = rotation_r(3, 2, 0.3);
  CHECK(r(0, 0) == Complex(1, 0));
  CHECK(r(0, 1) == Complex(0, 0));
  CHECK(std::abs(r(1, 1).real() - std::cos(0.3)) < 1e-15);
  CHECK(std::abs(r(2, 1).real() - std::sin(0.3)) < 1e-15);
  CHECK(std::abs(r(1, 2).real() + std::sin(0.3)) < 1e-15);
  CHECK(is_unitary(r));

  CHECK_THROWS_AS(rotation_r(3, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(rotation_r(3, 3, 0.1), std::invalid_argument);
}

TEST_CASE("the qutrit phase gate at Z angles reproduces the clock matrix") {
  const CMatrix s = phase_s(3, {2 * kPi / 3, 4 * kPi / 3});
  CHECK(max_abs((s - pauli_z(3)).eval()) < 1e-12);
  CHECK_THROWS_AS(phase_s(3, {0.1}), std::invalid_argument);
}

TEST_CASE("the symmetric qubit phase gate at pi is Z up to a global phase") {
  const CMatrix s = phase_s_qubit(kPi);
  const CMatrix expected = Complex(0, -1) * pauli_z(2);
  CHECK(max_abs((s - expected).eval()) < 1e-15);
  CHECK(is_unitary(phase_s_qubit(0.7)));
}

TEST_CASE("compose_unitary multiplies S after the rotation ladder") {
  const StateParams p = make_qudit_params(3, {0.4, 0.9}, {0.2, 5.0});
  const CMatrix expected = phase_s(3, {0.2, 5.0}) * rotation_r(3, 2, 0.9) *
                           rotation_r(3, 1, 0.4);
  CHECK(max_abs((compose_unitary(p) - expected).eval()) < 1e-14);
  CHECK(is_unitary(compose_unitary(p)));
}

TEST_CASE("qubit example: theta pi/4, phi pi/2 is (1, i)/sqrt2 up to phase") {
  CVector target(2);
  target << Complex(1, 0) / std::sqrt(2.0), Complex(0, 1) / std::sqrt(2.0);
  const QuantumRegister psi = QuantumRegister::single(target, "M");

  const StateParams p = decompose(psi, PhaseConvention::kQubitSymmetric);
  CHECK(p.thetas[0] == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK(p.phis[0] == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(fidelity_up_to_phase(compose_state(p, "M"), psi) >= 1.0 - 1e-12);
}

TEST_CASE("qutrit example: the uniform state has the textbook angles") {
  CVector target = CVector::Constant(3, Complex(1, 0) / std::sqrt(3.0));
  const QuantumRegister psi = QuantumRegister::single(target, "M");
  const StateParams p = decompose(psi, PhaseConvention::kQuditLeadingOne);
  CHECK(p.thetas[0] ==
        doctest::Approx(std::acos(1.0 / std::sqrt(3.0))).epsilon(1e-12));
  CHECK(p.thetas[1] == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK(p.phis[0] == doctest::Approx(0.0));
  CHECK(p.phis[1] == doctest::Approx(0.0));
  CHECK(fidelity_up_to_phase(compose_state(p, "M"), psi) >= 1.0 - 1e-12);
}

TEST_CASE("decompose handles vanishing amplitudes") {
  // Middle amplitude zero: theta_2 hits pi/2 and phi_1 defaults to 0.
  CVector gap(3);
  gap << 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
  const StateParams p =
      decompose(QuantumRegister::single(gap, "M"), PhaseConvention::kQuditLeadingOne);
  CHECK(p.thetas[0] == doctest::Approx(kPi / 4).epsilon(1e-12));
  CHECK(p.thetas[1] == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(p.phis[0] == doctest::Approx(0.0));
  CHECK(fidelity_up_to_phase(compose_state(p, "M"),
                             QuantumRegister::single(gap, "M")) >= 1.0 - 1e-12);

  // Leading amplitude zero: the anchor moves to the first nonzero entry.
  CVector shifted(3);
  shifted << 0, Complex(0, 1), 0;
  const StateParams q = decompose(QuantumRegister::single(shifted, "M"),
                                  PhaseConvention::kQuditLeadingOne);
  CHECK(q.thetas[0] == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(q.thetas[1] == doctest::Approx(0.0));
  CHECK(fidelity_up_to_phase(compose_state(q, "M"),
                             QuantumRegister::single(shifted, "M")) >=
        1.0 - 1e-12);

  // Basis states sit at the corners of the angle ranges.
  const StateParams zero = decompose(
      QuantumRegister::basis_state({4}, {"M"}, {0}), PhaseConvention::kQuditLeadingOne);
  for (double t : zero.thetas) CHECK(t == doctest::Approx(0.0));
  const StateParams top = decompose(
      QuantumRegister::basis_state({4}, {"M"}, {3}), PhaseConvention::kQuditLeadingOne);
  for (double t : top.thetas) CHECK(t == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("decompose-compose round-trips random states") {
  RandomStream rng(31);
  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 30; ++trial) {
      const QuantumRegister psi =
          QuantumRegister::single(random_state(d, rng), "M");
      const StateParams p = decompose(psi, PhaseConvention::kQuditLeadingOne);
      CHECK(fidelity_up_to_phase(compose_state(p, "M"), psi) >= 1.0 - 1e-9);
    }
  }
  for (int trial = 0; trial < 50; ++trial) {
    const QuantumRegister psi =
        QuantumRegister::single(random_state(2, rng), "M");
    const StateParams p = decompose(psi, PhaseConvention::kQubitSymmetric);
    CHECK(fidelity_up_to_phase(compose_state(p, "M"), psi) >= 1.0 - 1e-9);
  }
}

TEST_CASE("parameter validation rejects out-of-range angles") {
  CHECK_THROWS_AS(make_qudit_params(3, {2.0, 0.1}, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_qudit_params(3, {0.1}, {0, 0}), std::invalid_argument);
  const StateParams p = make_qudit_params(3, {0.3, 0.4}, {-kPi / 2, 5 * kPi});
  CHECK(p.phis[0] == doctest::Approx(3 * kPi / 2).epsilon(1e-12));
  CHECK(p.phis[1] == doctest::Approx(kPi).epsilon(1e-12));
  CHECK_THROWS_AS(decompose(QuantumRegister::max_entangled(2, "a", "b"),
                            PhaseConvention::kQuditLeadingOne),
                  std::invalid_argument);
  CHECK_THROWS_AS(decompose(QuantumRegister::basis_state({3}, {"M"}, {0}),
                            PhaseConvention::kQubitSymmetric),
                  std::invalid_argument);
}
