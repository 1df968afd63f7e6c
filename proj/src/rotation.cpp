#include "qpir/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpir/pauli.hpp"

namespace qpir {

namespace {

double canonical_phase(double phi) {
  const double two_pi = 2.0 * kPi;
  double p = std::fmod(phi, two_pi);
  if (p < 0) p += two_pi;
  if (p >= two_pi) p = 0.0;
  return p;
}

void check_angles(const StateParams& p) {
  const std::size_t want = p.convention == PhaseConvention::kQubitSymmetric
                               ? 1
                               : static_cast<std::size_t>(p.d - 1);
  if (p.thetas.size() != want || p.phis.size() != want) {
    throw std::invalid_argument(
        "StateParams: expected " + std::to_string(want) +
        " theta/phi angles, got " + std::to_string(p.thetas.size()) + "/" +
        std::to_string(p.phis.size()));
  }
  for (double t : p.thetas) {
    if (t < -1e-12 || t > kPi / 2 + 1e-12) {
      throw std::invalid_argument("StateParams: theta " + std::to_string(t) +
                                  " outside [0, pi/2]");
    }
  }
}

}  // namespace

CMatrix rotation_r(int d, int s, double theta) {
  if (d < 2) throw std::invalid_argument("rotation_r: dimension must be >= 2");
  if (s < 1 || s > d - 1) {
    throw std::invalid_argument("rotation_r: level index " + std::to_string(s) +
                                " outside [1, " + std::to_string(d - 1) + "]");
  }
  CMatrix r = CMatrix::Identity(d, d);
  const double c = std::cos(theta), sn = std::sin(theta);
  r(s - 1, s - 1) = c;
  r(s - 1, s) = -sn;
  r(s, s - 1) = sn;
  r(s, s) = c;
  return r;
}

CMatrix phase_s(int d, const std::vector<double>& phis) {
  if (d < 2) throw std::invalid_argument("phase_s: dimension must be >= 2");
  if (phis.size() != static_cast<std::size_t>(d - 1)) {
    throw std::invalid_argument("phase_s: expected " + std::to_string(d - 1) +
                                " angles, got " + std::to_string(phis.size()));
  }
  CMatrix m = CMatrix::Zero(d, d);
  m(0, 0) = Complex(1, 0);
  for (int s = 1; s < d; ++s) m(s, s) = std::polar(1.0, phis[s - 1]);
  return m;
}

CMatrix phase_s_qubit(double phi) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = std::polar(1.0, -phi / 2);
  m(1, 1) = std::polar(1.0, phi / 2);
  return m;
}

StateParams make_qubit_params(double theta, double phi) {
  StateParams p;
  p.d = 2;
  p.convention = PhaseConvention::kQubitSymmetric;
  p.thetas = {theta};
  p.phis = {canonical_phase(phi)};
  check_angles(p);
  return p;
}

StateParams make_qudit_params(int d, std::vector<double> thetas,
                              std::vector<double> phis) {
  StateParams p;
  p.d = d;
  p.convention = PhaseConvention::kQuditLeadingOne;
  p.thetas = std::move(thetas);
  for (double& phi : phis) phi = canonical_phase(phi);
  p.phis = std::move(phis);
  check_angles(p);
  return p;
}

CMatrix compose_unitary(const StateParams& params) {
  check_angles(params);
  if (params.convention == PhaseConvention::kQubitSymmetric) {
    return phase_s_qubit(params.phis[0]) * rotation_r(2, 1, params.thetas[0]);
  }
  CMatrix u = CMatrix::Identity(params.d, params.d);
  for (int s = 1; s <= params.d - 1; ++s) {
    // Left-multiplication keeps R_1 innermost: u = R_{d-1} ... R_1.
    u = rotation_r(params.d, s, params.thetas[s - 1]) * u;
  }
  return phase_s(params.d, params.phis) * u;
}

QuantumRegister compose_state(const StateParams& params,
                              const std::string& label) {
  const CMatrix u = compose_unitary(params);
  return QuantumRegister::single(u.col(0), label);
}

StateParams decompose(const QuantumRegister& psi, PhaseConvention convention) {
  if (psi.qudit_count() != 1) {
    throw std::invalid_argument("decompose: expected a single-qudit register");
  }
  const int d = psi.dims()[0];
  if (convention == PhaseConvention::kQubitSymmetric && d != 2) {
    throw std::invalid_argument(
        "decompose: qubit convention requires dimension 2");
  }
  CVector c = psi.amplitudes();

  // Fix the global phase: first nonvanishing amplitude real nonnegative.
  Index anchor = -1;
  for (Index i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) > tol::kEigZero) {
      anchor = i;
      break;
    }
  }
  if (anchor >= 0) c *= std::polar(1.0, -std::arg(c(anchor)));

  if (convention == PhaseConvention::kQubitSymmetric) {
    const double theta =
        std::acos(std::clamp(std::abs(c(0)), 0.0, 1.0));
    double phi = 0.0;
    if (std::abs(c(0)) > tol::kEigZero && std::abs(c(1)) > tol::kEigZero) {
      phi = std::arg(c(1)) - std::arg(c(0));
    }
    return make_qubit_params(theta, phi);
  }

  std::vector<double> thetas(d - 1, 0.0), phis(d - 1, 0.0);
  double prefix = 1.0;  // sin t1 ... sin t_{s-1}
  for (int s = 1; s <= d - 1; ++s) {
    if (prefix > tol::kEigZero) {
      thetas[s - 1] =
          std::acos(std::clamp(std::abs(c(s - 1)) / prefix, 0.0, 1.0));
      prefix *= std::sin(thetas[s - 1]);
    }
    if (std::abs(c(s)) > tol::kEigZero) phis[s - 1] = std::arg(c(s));
  }
  return make_qudit_params(d, std::move(thetas), std::move(phis));
}

}  // namespace qpir
