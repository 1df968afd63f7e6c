#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qpir/density.hpp"
#include "qpir/entropy_props.hpp"
#include "qpir/linalg.hpp"
#include "qpir/pauli.hpp"
#include "qpir/schmidt.hpp"

using namespace qpir;

namespace {

DensityMatrix diagonal_density(const std::vector<double>& probs,
                               const std::string& label) {
  const int d = static_cast<int>(probs.size());
  CMatrix m = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = probs[i];
  return DensityMatrix({d}, {label}, m);
}

}  // namespace

TEST_CASE("construction validates Hermiticity, trace, and positivity") {
  CMatrix ok = CMatrix::Zero(2, 2);
  ok(0, 0) = 0.25;
  ok(1, 1) = 0.75;
  CHECK_NOTHROW(DensityMatrix({2}, {"a"}, ok));

  CMatrix skew = ok;
  skew(0, 1) = Complex(0, 0.1);
  CHECK_THROWS_AS(DensityMatrix({2}, {"a"}, skew), std::invalid_argument);

  CHECK_THROWS_AS(DensityMatrix({2}, {"a"}, (2 * ok).eval()),
                  std::invalid_argument);

  CMatrix indefinite = CMatrix::Zero(2, 2);
  indefinite(0, 0) = 1.5;
  indefinite(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix({2}, {"a"}, indefinite), std::invalid_argument);
}

TEST_CASE("from_pure produces the rank-one projector") {
  RandomStream rng(1);
  const QuantumRegister psi = QuantumRegister::single(random_state(3, rng), "x");
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  const CMatrix expected =
      psi.amplitudes() * psi.amplitudes().adjoint();
  CHECK(max_abs((rho.matrix() - expected).eval()) < 1e-14);
  const auto spectrum = density_spectrum(rho);
  CHECK(spectrum.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectrum.front() < 1e-12);
}

TEST_CASE("von Neumann entropy reproduces hand values") {
  CHECK(von_neumann_entropy(diagonal_density({0.25, 0.75}, "a")) ==
        doctest::Approx(0.811278124459).epsilon(1e-10));
  CHECK(von_neumann_entropy(diagonal_density({1.0, 0.0}, "a")) ==
        doctest::Approx(0.0));
  CHECK(von_neumann_entropy(diagonal_density({0.25, 0.25, 0.25, 0.25}, "a")) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Basis-independent: conjugating by a unitary changes nothing.
  RandomStream rng(2);
  const CMatrix u = random_unitary(2, rng);
  const CMatrix rotated =
      u * diagonal_density({0.25, 0.75}, "a").matrix() * u.adjoint();
  CHECK(von_neumann_entropy(DensityMatrix({2}, {"a"}, rotated)) ==
        doctest::Approx(0.811278124459).epsilon(1e-10));
}

TEST_CASE("trace distance reproduces hand values") {
  const DensityMatrix pure = diagonal_density({1.0, 0.0}, "a");
  const DensityMatrix mixed = diagonal_density({0.5, 0.5}, "a");
  CHECK(trace_distance(pure, mixed) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(trace_distance(pure, pure) == doctest::Approx(0.0));
  // Commuting case: half the l1 distance of the spectra.
  const DensityMatrix p = diagonal_density({0.7, 0.3}, "a");
  const DensityMatrix q = diagonal_density({0.2, 0.8}, "a");
  CHECK(trace_distance(p, q) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("partial_trace of a density operator matches the register path") {
  RandomStream rng(3);
  const QuantumRegister reg({2, 3}, {"a", "b"}, random_state(6, rng));
  const DensityMatrix joint = DensityMatrix::from_pure(reg);
  const DensityMatrix via_density = partial_trace(joint, {"b"});
  const DensityMatrix via_register = partial_trace(reg, {"b"});
  CHECK(max_abs((via_density.matrix() - via_register.matrix()).eval()) <
        1e-12);
}

TEST_CASE("purify round-trips and its marginal carries the entropy") {
  RandomStream rng(4);
  const CMatrix rho_m = random_density(3, 3, rng);
  const DensityMatrix rho({3}, {"sys"}, rho_m);
  const QuantumRegister psi = purify(rho, "ref", "sys");
  CHECK(psi.dims() == std::vector<int>{3, 3});
  const DensityMatrix back = partial_trace(psi, {"sys"});
  CHECK(max_abs((back.matrix() - rho_m).eval()) < 1e-10);
  const DensityMatrix ref_side = partial_trace(psi, {"ref"});
  CHECK(von_neumann_entropy(ref_side) ==
        doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-9));
}

TEST_CASE("state_overlap is the expectation of the projector") {
  RandomStream rng(5);
  const CVector v = random_state(3, rng);
  const QuantumRegister psi = QuantumRegister::single(v, "x");
  const CMatrix rho_m = random_density(3, 2, rng);
  const DensityMatrix rho({3}, {"x"}, rho_m);
  const double expected = (v.adjoint() * rho_m * v)(0, 0).real();
  CHECK(state_overlap(rho, psi) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("match_local_unitary recovers a planted local rotation") {
  RandomStream rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int da = 2 + trial % 3;
    const int db = 2 + (trial / 3) % 3;
    const QuantumRegister psi({da, db}, {"a", "b"},
                              random_state(da * db, rng));
    const CMatrix u = random_unitary(db, rng);
    const QuantumRegister phi = apply_operator(psi, u, {"b"});
    const CMatrix v = match_local_unitary(phi, psi, {"a"});
    REQUIRE(is_unitary(v));
    const QuantumRegister mapped = apply_operator(psi, v, {"b"});
    CHECK(fidelity_up_to_phase(mapped, phi) >= 1.0 - 1e-9);
  }
}

TEST_CASE("match_local_unitary handles degenerate Schmidt spectra") {
  // A maximally entangled state has a fully degenerate marginal.
  RandomStream rng(7);
  const QuantumRegister bell = QuantumRegister::max_entangled(3, "a", "b");
  const CMatrix u = random_unitary(3, rng);
  const QuantumRegister rotated = apply_operator(bell, u, {"b"});
  const CMatrix v = match_local_unitary(rotated, bell, {"a"});
  const QuantumRegister mapped = apply_operator(bell, v, {"b"});
  CHECK(fidelity_up_to_phase(mapped, rotated) >= 1.0 - 1e-9);
}

TEST_CASE("match_local_unitary rejects differing marginals") {
  const QuantumRegister zero =
      QuantumRegister::basis_state({2, 2}, {"a", "b"}, {0, 0});
  const QuantumRegister ent = QuantumRegister::max_entangled(2, "a", "b");
  CHECK_THROWS_AS(match_local_unitary(zero, ent, {"a"}), std::invalid_argument);
  // Same marginal on A but described with B-side difference is fine:
  const QuantumRegister one =
      QuantumRegister::basis_state({2, 2}, {"a", "b"}, {0, 1});
  const CMatrix v = match_local_unitary(one, zero, {"a"});
  const QuantumRegister mapped = apply_operator(zero, v, {"b"});
  CHECK(fidelity_up_to_phase(mapped, one) >= 1.0 - 1e-9);
}

TEST_CASE("entropy property suite passes on sampled instances") {
  RandomStream rng(8);
  const auto report = check_entropy_properties(200, 6, 1e-8, rng);
  REQUIRE(report.results.size() == 5);
  for (const auto& r : report.results) {
    CAPTURE(r.property);
    CHECK(r.instances >= 200);
    CHECK(r.violations == 0);
    CHECK(r.max_deviation < 1e-8);
  }
  CHECK(report.all_pass());
}
