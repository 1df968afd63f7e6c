#include "qpir/entropy_props.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "qpir/density.hpp"
#include "qpir/linalg.hpp"
#include "qpir/register.hpp"

namespace qpir {

namespace {

DensityMatrix wrap(const CMatrix& rho, const std::string& label) {
  return DensityMatrix({static_cast<int>(rho.rows())}, {label}, rho);
}

void record(EntropyPropertyResult& r, double deviation, double tolerance,
            const std::string& witness) {
  ++r.instances;
  if (deviation > r.max_deviation) r.max_deviation = deviation;
  if (deviation > tolerance) {
    ++r.violations;
    if (r.witnesses.size() < 8) r.witnesses.push_back(witness);
  }
}

}  // namespace

EntropyPropertiesReport check_entropy_properties(int instances_per_property,
                                                 int max_dim, double tolerance,
                                                 RandomStream& rng) {
  EntropyPropertiesReport report;
  report.tolerance = tolerance;

  auto dim = [&]() { return 2 + rng.uniform_int(max_dim - 1); };

  {
    EntropyPropertyResult r;
    r.property = "pure-marginal";
    for (int i = 0; i < instances_per_property; ++i) {
      const int da = dim(), db = dim();
      const QuantumRegister psi(
          {da, db}, {"A", "B"}, random_state(da * db, rng));
      const double ha = von_neumann_entropy(partial_trace(psi, {"A"}));
      const double hb = von_neumann_entropy(partial_trace(psi, {"B"}));
      record(r, std::abs(ha - hb), tolerance,
             fmt::format("dims ({},{}): H(A)={} H(B)={}", da, db, ha, hb));
    }
    report.results.push_back(std::move(r));
  }

  {
    EntropyPropertyResult r;
    r.property = "additivity";
    for (int i = 0; i < instances_per_property; ++i) {
      const int da = dim(), db = dim();
      const CMatrix rho = random_density(da, 1 + rng.uniform_int(da), rng);
      const CMatrix sigma = random_density(db, 1 + rng.uniform_int(db), rng);
      const double lhs = von_neumann_entropy(
          DensityMatrix({da, db}, {"A", "B"}, kron(rho, sigma)));
      const double rhs =
          von_neumann_entropy(wrap(rho, "A")) + von_neumann_entropy(wrap(sigma, "B"));
      record(r, std::abs(lhs - rhs), tolerance,
             fmt::format("dims ({},{}): H(AB)={} H(A)+H(B)={}", da, db, lhs, rhs));
    }
    report.results.push_back(std::move(r));
  }

  {
    EntropyPropertyResult r;
    r.property = "unitary-invariance";
    for (int i = 0; i < instances_per_property; ++i) {
      const int d = dim();
      const CMatrix rho = random_density(d, 1 + rng.uniform_int(d), rng);
      const CMatrix u = random_unitary(d, rng);
      const double h0 = von_neumann_entropy(wrap(rho, "A"));
      const double h1 = von_neumann_entropy(wrap(u * rho * u.adjoint(), "A"));
      record(r, std::abs(h0 - h1), tolerance,
             fmt::format("dim {}: H={} H(U.U+)={}", d, h0, h1));
    }
    report.results.push_back(std::move(r));
  }

  {
    EntropyPropertyResult r;
    r.property = "triangle";
    for (int i = 0; i < instances_per_property; ++i) {
      const int dx = dim(), dy = dim();
      const CMatrix joint = random_density(dx * dy, 1 + rng.uniform_int(dx * dy), rng);
      const DensityMatrix rho_xy({dx, dy}, {"X", "Y"}, joint);
      const double hxy = von_neumann_entropy(rho_xy);
      const double hx = von_neumann_entropy(partial_trace(rho_xy, {"X"}));
      const double hy = von_neumann_entropy(partial_trace(rho_xy, {"Y"}));
      // Violation when H(XY) + H(X) - H(Y) dips below 0.
      record(r, std::max(0.0, hy - hxy - hx), tolerance,
             fmt::format("dims ({},{}): H(XY)={} H(X)={} H(Y)={}", dx, dy, hxy,
                         hx, hy));
    }
    report.results.push_back(std::move(r));
  }

  {
    EntropyPropertyResult r;
    r.property = "orthogonal-mixing";
    for (int i = 0; i < instances_per_property; ++i) {
      // Random orthogonal decomposition C^D = V_1 + ... + V_m with each rho_s
      // supported on its own subspace, so Tr rho_s rho_t = 0 for s != t.
      const int m = 2 + rng.uniform_int(2);
      std::vector<int> sizes(m);
      int total = 0;
      for (int s = 0; s < m; ++s) {
        sizes[s] = 1 + rng.uniform_int(2);
        total += sizes[s];
      }
      const CMatrix basis = random_unitary(total, rng);
      std::vector<double> probs(m);
      double psum = 0;
      for (int s = 0; s < m; ++s) {
        probs[s] = 0.05 + rng.uniform();
        psum += probs[s];
      }
      CMatrix mix = CMatrix::Zero(total, total);
      double rhs = 0;
      int col = 0;
      for (int s = 0; s < m; ++s) {
        probs[s] /= psum;
        const CMatrix block = basis.middleCols(col, sizes[s]);
        col += sizes[s];
        CMatrix rho_s;
        if (sizes[s] == 1) {
          rho_s = block * block.adjoint();
        } else {
          rho_s = block * random_density(sizes[s], 1 + rng.uniform_int(sizes[s]), rng) *
                  block.adjoint();
        }
        mix += probs[s] * rho_s;
        rhs += probs[s] * (von_neumann_entropy(wrap(rho_s, "A")) -
                           std::log2(probs[s]));
      }
      const double lhs = von_neumann_entropy(wrap(mix, "A"));
      record(r, std::abs(lhs - rhs), tolerance,
             fmt::format("D={} m={}: H(mix)={} expected={}", total, m, lhs, rhs));
    }
    report.results.push_back(std::move(r));
  }

  return report;
}

}  // namespace qpir
