#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qpir/linalg.hpp"
#include "qpir/pauli.hpp"
#include "qpir/rng.hpp"

using namespace qpir;

TEST_CASE("kron lays blocks out row-major") {
  CMatrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const CMatrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == Complex(1, 0));   // a00 * b01
  CHECK(k(0, 3) == Complex(2, 0));   // a01 * b01
  CHECK(k(3, 2) == Complex(4, 0));   // a11 * b10
  CHECK(k(2, 1) == Complex(3, 0));   // a10 * b01
}

TEST_CASE("unitarity checks accept unitaries and reject the rest") {
  RandomStream rng(11);
  const CMatrix u = random_unitary(3, rng);
  CHECK(is_unitary(u));
  CHECK(max_abs((u.adjoint() * u - CMatrix::Identity(3, 3)).eval()) < 1e-12);
  CMatrix bad = u;
  bad(0, 0) += 1e-3;
  CHECK_FALSE(is_unitary(bad));
  CHECK_THROWS_AS(require_unitary(bad, "test"), std::invalid_argument);
  CHECK_FALSE(is_unitary(CMatrix::Zero(2, 3)));
}

TEST_CASE("unitary_power handles positive, zero, and negative exponents") {
  RandomStream rng(12);
  const CMatrix u = random_unitary(4, rng);
  CHECK(max_abs((unitary_power(u, 3) - u * u * u).eval()) < 1e-10);
  CHECK(max_abs((unitary_power(u, 0) - CMatrix::Identity(4, 4)).eval()) == 0.0);
  CHECK(max_abs((unitary_power(u, -2) - (u * u).adjoint()).eval()) < 1e-10);
  CHECK(max_abs((unitary_power(u, -1) * u - CMatrix::Identity(4, 4)).eval()) <
        1e-10);
}

TEST_CASE("random samplers are seed-deterministic and well-formed") {
  RandomStream a(99), b(99), c(100);
  const CMatrix ua = random_unitary(3, a);
  const CMatrix ub = random_unitary(3, b);
  const CMatrix uc = random_unitary(3, c);
  CHECK(max_abs((ua - ub).eval()) == 0.0);
  CHECK(max_abs((ua - uc).eval()) > 1e-3);

  const CVector s = random_state(5, a);
  CHECK(std::abs(s.norm() - 1.0) < 1e-12);

  const CMatrix rho = random_density(4, 2, a);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
  CHECK(max_abs((rho - rho.adjoint()).eval()) < 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("commutator_norm separates commuting from non-commuting pairs") {
  CHECK(commutator_norm(pauli_z(3), pauli_z_power(3, 2)) < 1e-15);
  CHECK(commutator_norm(pauli_x(2), pauli_z(2)) > 1.0);
}

TEST_CASE("generalized Pauli matrices act as shift and clock") {
  for (int d = 2; d <= 5; ++d) {
    const CMatrix x = pauli_x(d);
    const CMatrix z = pauli_z(d);
    for (int s = 0; s < d; ++s) {
      CVector basis = CVector::Zero(d);
      basis(s) = 1;
      const CVector shifted = x * basis;
      CHECK(std::abs(shifted((s + 1) % d) - Complex(1, 0)) < 1e-15);
      const CVector clocked = z * basis;
      CHECK(std::abs(clocked(s) - omega_power(d, s)) < 1e-15);
    }
    CHECK(max_abs((unitary_power(x, d) - CMatrix::Identity(d, d)).eval()) <
          1e-12);
    CHECK(max_abs((unitary_power(z, d) - CMatrix::Identity(d, d)).eval()) <
          1e-12);
  }
}

TEST_CASE("Z X equals omega X Z") {
  for (int d = 2; d <= 5; ++d) {
    const CMatrix lhs = pauli_z(d) * pauli_x(d);
    const CMatrix rhs = omega_power(d, 1) * pauli_x(d) * pauli_z(d);
    CHECK(max_abs((lhs - rhs).eval()) < 1e-14);
  }
}

TEST_CASE("pauli_xz matches explicit power products") {
  for (int d = 2; d <= 4; ++d) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const CMatrix direct = pauli_xz(d, a, b);
        const CMatrix product =
            unitary_power(pauli_x(d), a) * unitary_power(pauli_z(d), b);
        CHECK(max_abs((direct - product).eval()) < 1e-13);
      }
    }
  }
  // Negative exponents reduce mod d.
  CHECK(max_abs((pauli_xz(3, -1, 0) - pauli_x_power(3, 2)).eval()) < 1e-15);
}

TEST_CASE("vectorize is row-major and round-trips") {
  CMatrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const CVector v = vectorize(m);
  REQUIRE(v.size() == 6);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(2) == Complex(3, 0));
  CHECK(v(3) == Complex(4, 0));  // row 1 starts after all of row 0
  CHECK(max_abs((unvectorize(v, 2, 3) - m).eval()) == 0.0);
  CHECK_THROWS_AS(unvectorize(v, 2, 2), std::invalid_argument);
}

TEST_CASE("the vectorization identity (B kron C^T)|A>> = |BAC>>") {
  RandomStream rng(7);
  for (int d = 2; d <= 4; ++d) {
    const CMatrix a = random_unitary(d, rng);
    const CMatrix b = random_unitary(d, rng);
    const CMatrix c = random_unitary(d, rng);
    const CVector lhs = kron(b, c.transpose().eval()) * vectorize(a);
    const CVector rhs = vectorize((b * a * c).eval());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("local operators on the maximally entangled vector") {
  RandomStream rng(8);
  const int d = 3;
  const CMatrix a = random_unitary(d, rng);
  const CMatrix b = random_unitary(d, rng);
  const CVector lhs = kron(a, b) * max_entangled_vector(d);
  const CVector rhs = vectorize((a * b.transpose()).eval());
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("RandomStream reproduces bit-for-bit and children differ") {
  RandomStream a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());
  RandomStream c0 = RandomStream::child(5, 0);
  RandomStream c1 = RandomStream::child(5, 1);
  CHECK(c0.bits() != c1.bits());
  CHECK(RandomStream::mix(5, 0) == RandomStream::mix(5, 0));
  CHECK(RandomStream::mix(5, 0) != RandomStream::mix(6, 0));
}

TEST_CASE("uniform stays in [0,1) and uniform_int in range") {
  RandomStream rng(21);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const int n = rng.uniform_int(7);
    CHECK(n >= 0);
    CHECK(n < 7);
  }
}

TEST_CASE("sample_discrete validates weights and never emits zero-weight bins") {
  RandomStream rng(22);
  CHECK_THROWS(rng.sample_discrete({0.5, 0.4}));         // sums to 0.9
  CHECK_THROWS(rng.sample_discrete({-0.5, 1.5}));        // negative weight
  for (int i = 0; i < 500; ++i) {
    CHECK(rng.sample_discrete({0.0, 1.0}) == 1);
    CHECK(rng.sample_discrete({1.0, 0.0}) == 0);
  }
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += rng.sample_discrete({0.25, 0.75});
  const double freq = static_cast<double>(ones) / n;
  CHECK(std::abs(freq - 0.75) < 0.02);
}
