#pragma once

#include <string>
#include <vector>

#include "qpir/rng.hpp"

namespace qpir {

// Checkable report for the standard entropy properties, evaluated on sampled
// states:
//   pure-marginal    H(rho_A) = H(rho_B) for bipartite pure states
//   additivity       H(rho x sigma) = H(rho) + H(sigma)
//   unitary-invar    H(U rho U+) = H(rho)
//   triangle         H(XY) + H(X) >= H(Y)
//   orthogonal-mix   H(sum p_s rho_s) = sum p_s (H(rho_s) - log2 p_s)
//                    for ensembles supported on orthogonal subspaces
struct EntropyPropertyResult {
  std::string property;
  int instances = 0;
  int violations = 0;
  double max_deviation = 0.0;  // for the inequality: worst slack below 0
  std::vector<std::string> witnesses;
};

struct EntropyPropertiesReport {
  std::vector<EntropyPropertyResult> results;
  double tolerance = 0.0;
  bool all_pass() const {
    for (const auto& r : results) {
      if (r.violations > 0) return false;
    }
    return true;
  }
};

// Runs every property on `instances_per_property` sampled inputs with
// subsystem dimensions in [2, max_dim]. Deviations beyond `tolerance` count
// as violations and record a witness line.
EntropyPropertiesReport check_entropy_properties(int instances_per_property,
                                                 int max_dim, double tolerance,
                                                 RandomStream& rng);

}  // namespace qpir
