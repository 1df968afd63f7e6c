#include <cmath>
#include <stdexcept>

#include "qpir/linalg.hpp"
#include "qpir/pauli.hpp"
#include "qpir/protocols.hpp"

namespace qpir {

namespace {

std::vector<double> weighted_phis(const AngleSet& angles, const SubsetQuery& q,
                                  double sign) {
  std::vector<double> acc(angles.d - 1, 0.0);
  for (int l = 1; l <= q.f(); ++l) {
    if (!q.at(l)) continue;
    const auto& phis = angles.params[l - 1].phis;
    for (int s = 0; s < angles.d - 1; ++s) acc[s] += phis[s];
  }
  for (double& v : acc) v *= sign;
  return acc;
}

double weighted_theta(const AngleSet& angles, int s, const SubsetQuery& q) {
  double acc = 0.0;
  for (int l = 1; l <= q.f(); ++l) {
    if (q.at(l)) acc += angles.params[l - 1].thetas[s - 1];
  }
  return acc;
}

bool merge_accepts(MergeMode mode, int merge_index, const BellOutcome& o) {
  if (o.a != 0) return false;
  return mode == MergeMode::kPaperLiteral || merge_index == 0 || o.b == 0;
}

}  // namespace

std::vector<PairRequest> protocol4_request_roles(int d) {
  std::vector<PairRequest> roles;
  roles.push_back(PairRequest{true, 0, 0});
  for (int s = d - 1; s >= 1; --s) roles.push_back(PairRequest{false, s, 0});
  return roles;
}

QuantumRegister protocol4_request_state(const AngleSet& angles,
                                        const QueryPair& qp,
                                        const PairRequest& request,
                                        const std::string& label_a,
                                        const std::string& label_b) {
  const int d = angles.d;
  QuantumRegister reg = QuantumRegister::max_entangled(d, label_a, label_b);
  if (request.phase) {
    const double sign = request.flip == 0 ? 1.0 : -1.0;
    reg = apply_operator(reg, phase_s(d, weighted_phis(angles, qp.q, sign)),
                         {label_a});
    reg = apply_operator(
        reg, phase_s(d, weighted_phis(angles, qp.q_prime, sign)).conjugate(),
        {label_b});
  } else {
    const double sign = request.flip == 0 ? -1.0 : 1.0;
    reg = apply_operator(
        reg, rotation_r(d, request.s, sign * weighted_theta(angles, request.s, qp.q)),
        {label_a});
    // Rotations are real, so the conjugated server-2 operator is the rotation
    // itself at its own weighted angle.
    reg = apply_operator(
        reg,
        rotation_r(d, request.s, sign * weighted_theta(angles, request.s, qp.q_prime)),
        {label_b});
  }
  return reg;
}

std::vector<ChainBranch> protocol4_chain_branches(const AngleSet& angles,
                                                  const QueryPair& qp, int flip,
                                                  MergeMode mode) {
  const int d = angles.d;
  PairRequest phase_req{true, 0, flip};
  std::vector<ChainBranch> frontier;
  frontier.push_back(ChainBranch{
      {}, 1.0, protocol4_request_state(angles, qp, phase_req, "X", "X'")});

  for (int s = d - 1; s >= 1; --s) {
    const int merge_index = d - 1 - s;
    PairRequest rot_req{false, s, flip};
    std::vector<ChainBranch> next;
    for (const auto& cur : frontier) {
      const QuantumRegister fresh =
          protocol4_request_state(angles, qp, rot_req, "P", "P'");
      const QuantumRegister joint = tensor_product(cur.state, fresh);
      for (const auto& branch : bell_branches(joint, "X'", "P'")) {
        if (!merge_accepts(mode, merge_index, branch.outcome)) continue;
        std::vector<int> alphas = cur.alphas;
        alphas.push_back(branch.outcome.b);
        next.push_back(ChainBranch{std::move(alphas),
                                   cur.probability * branch.probability,
                                   branch.state.renamed("P", "X'")});
      }
    }
    frontier = std::move(next);
  }
  return frontier;
}

double protocol4_chain_success_probability(int d, MergeMode mode) {
  const double per_first = 1.0 / d;
  double p = per_first;
  for (int j = 1; j < d - 1; ++j) {
    p *= mode == MergeMode::kStrict ? 1.0 / (static_cast<double>(d) * d)
                                    : 1.0 / d;
  }
  return p;
}

double protocol4_expected_pairs_per_attempt(int d, MergeMode mode) {
  // The phase pair and the first rotation pair are always requested; rotation
  // pair j >= 2 is requested only if all previous merges were accepted.
  double expected = 2.0;
  double reach = 1.0 / d;  // first merge accepted
  for (int j = 2; j <= d - 1; ++j) {
    expected += reach;
    reach *= mode == MergeMode::kStrict ? 1.0 / (static_cast<double>(d) * d)
                                        : 1.0 / d;
  }
  return expected;
}

double protocol4_expected_pairs_per_chain(int d, MergeMode mode) {
  return protocol4_expected_pairs_per_attempt(d, mode) /
         protocol4_chain_success_probability(d, mode);
}

SessionResult run_protocol4(const MessageSet& messages, int k, MergeMode mode,
                            RandomStream& rng, const SessionOptions& options) {
  if (messages.kind() != MessageKind::kPureStates) {
    throw std::invalid_argument("run_protocol4: messages must be pure states");
  }
  const int f = messages.f();
  if (k < 1 || k > f) {
    throw std::out_of_range("run_protocol4: index " + std::to_string(k) +
                            " outside [1, " + std::to_string(f) + "]");
  }
  const int d = messages.d();
  const double log_d = std::log2(static_cast<double>(d));
  const AngleSet angles =
      decompose_messages(messages, PhaseConvention::kQuditLeadingOne);

  const int max_mega = options.max_passes > 0 ? options.max_passes : 64 * d;
  const long max_chain_attempts = std::lround(
      64.0 / protocol4_chain_success_probability(d, mode));

  SessionResult result;
  result.p4.emplace();
  Transcript& tr = result.transcript;

  const QueryPair qp =
      options.forced_query
          ? query_pair_from(*options.forced_query, k, options.query_injection)
          : make_query_pair(f, k, rng, options.query_injection);
  result.queries = qp;
  tr.classical("user", "server1", f);
  tr.classical("user", "server2", f);
  result.ledger.classical_bits_up += 2 * f;

  const int forward_flip = qp.q.at(k) ? 0 : 1;

  auto request = [&](const PairRequest& req, const std::string& la,
                     const std::string& lb) {
    tr.pair_shared(log_d);
    tr.state_sent("server1", "user", log_d);
    tr.state_sent("server2", "user", log_d);
    result.ledger.ebits += log_d;
    result.ledger.qubits_down += 2 * log_d;
    return protocol4_request_state(angles, qp, req, la, lb);
  };

  for (int mega = 1; mega <= max_mega; ++mega) {
    // Both sign roles run to completion in the fixed public order; which one
    // is the forward chain stays user-private.
    std::optional<QuantumRegister> chain_state[2];
    std::vector<int> chain_alphas[2];
    bool budget_exhausted = false;

    for (int flip = 0; flip <= 1 && !budget_exhausted; ++flip) {
      long attempts = 0;
      while (!chain_state[flip]) {
        if (++attempts > max_chain_attempts) {
          budget_exhausted = true;
          break;
        }
        ++result.p4->chain_attempts;
        QuantumRegister acc = request(PairRequest{true, 0, flip}, "X", "X'");
        std::vector<int> alphas;
        bool ok = true;
        for (int s = d - 1; s >= 1 && ok; --s) {
          const QuantumRegister fresh =
              request(PairRequest{false, s, flip}, "P", "P'");
          const QuantumRegister joint = tensor_product(acc, fresh);
          auto [outcome, post] = bell_measure(joint, "X'", "P'", rng);
          tr.measurement("user", {outcome.a, outcome.b},
                         "merge level " + std::to_string(s));
          if (!merge_accepts(mode, d - 1 - s, outcome)) {
            ok = false;
            break;
          }
          alphas.push_back(outcome.b);
          acc = post.renamed("P", "X'");
        }
        if (ok) {
          chain_state[flip] = std::move(acc);
          chain_alphas[flip] = std::move(alphas);
          ++result.p4->chains_completed;
        }
      }
    }
    if (budget_exhausted) break;

    tr.pass_boundary();
    result.ledger.passes += 1;

    result.p4->alphas = chain_alphas[forward_flip];
    result.p4->betas = chain_alphas[1 - forward_flip];

    auto [x_out, column] =
        measure_computational(*chain_state[forward_flip], "X'", rng);
    tr.measurement("user", {x_out}, "final column measurement");
    if (x_out != 0) continue;

    int alpha_sum = 0;
    for (int a : result.p4->alphas) alpha_sum += a;
    QuantumRegister out =
        apply_operator(column, pauli_z_power(d, alpha_sum), {"X"});
    tr.output("message " + std::to_string(k) + " reconstructed");

    result.output_fidelity = fidelity_up_to_phase(
        out, QuantumRegister::single(messages.message(k).col(0), "X"));
    for (std::size_t j = 1; j < result.p4->alphas.size(); ++j) {
      if (result.p4->alphas[j] != 0) result.p4->tail_alpha_nonzero = true;
    }
    result.p4->literal_discrepancy =
        result.p4->tail_alpha_nonzero && result.output_fidelity < 1.0 - 1e-9;
    result.output = std::move(out);
    result.success = true;
    return result;
  }
  return result;  // budget exhausted; ledger and transcript remain valid
}

}  // namespace qpir
