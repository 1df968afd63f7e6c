#include <cmath>
#include <stdexcept>

#include "qpir/linalg.hpp"
#include "qpir/protocols.hpp"

namespace qpir {

namespace {

// Product of the selected unitaries (or their conjugates): prod_l M_l^{q_l}.
CMatrix selected_product(const MessageSet& messages, const SubsetQuery& q,
                         bool conjugated) {
  const int d = messages.d();
  CMatrix u = CMatrix::Identity(d, d);
  for (int l = 1; l <= messages.f(); ++l) {
    if (!q.at(l)) continue;
    if (conjugated) {
      u = messages.message(l).conjugate() * u;
    } else {
      u = messages.message(l) * u;
    }
  }
  return u;
}

}  // namespace

std::pair<QuantumRegister, QuantumRegister> protocol2_answer_states(
    const MessageSet& messages, const QueryPair& qp, ServerInjection injection,
    int k) {
  const int d = messages.d();

  QuantumRegister pair_q = QuantumRegister::max_entangled(d, "A", "A'");
  QuantumRegister pair_t = QuantumRegister::max_entangled(d, "B", "B'");

  CMatrix server1_q = selected_product(messages, qp.q, false);
  CMatrix server1_t = selected_product(messages, qp.t, false);
  if (injection == ServerInjection::kLeakyServer) {
    // Malicious deviation: server 1 slips in an extra, target-adjacent
    // message operator, correlating its answer with the database contents.
    const int leak = k % messages.f() + 1;
    server1_q = messages.message(leak) * server1_q;
  }
  pair_q = apply_operator(pair_q, server1_q, {"A"});
  pair_q = apply_operator(pair_q, selected_product(messages, qp.q_prime, true),
                          {"A'"});
  pair_t = apply_operator(pair_t, server1_t, {"B"});
  pair_t = apply_operator(pair_t, selected_product(messages, qp.t_prime, true),
                          {"B'"});
  return {std::move(pair_q), std::move(pair_t)};
}

SessionResult run_protocol2(const MessageSet& messages, int k, RandomStream& rng,
                            const SessionOptions& options) {
  if (messages.kind() != MessageKind::kUnitaries) {
    throw std::invalid_argument("run_protocol2: messages must be unitaries");
  }
  messages.require_commuting();
  const int f = messages.f();
  if (k < 1 || k > f) {
    throw std::out_of_range("run_protocol2: index " + std::to_string(k) +
                            " outside [1, " + std::to_string(f) + "]");
  }
  const int d = messages.d();
  const double log_d = std::log2(static_cast<double>(d));

  SessionResult result;
  Transcript& tr = result.transcript;

  const QueryPair qp =
      options.forced_query
          ? query_pair_from(*options.forced_query, k, options.query_injection)
          : make_query_pair(f, k, rng, options.query_injection);
  result.queries = qp;
  tr.classical("user", "server1", f);
  tr.classical("user", "server2", f);
  result.ledger.classical_bits_up += 2 * f;

  tr.pair_shared(log_d, "inter-server pair (A, A')");
  tr.pair_shared(log_d, "inter-server pair (B, B')");
  result.ledger.ebits += 2 * log_d;

  auto [pair_q, pair_t] =
      protocol2_answer_states(messages, qp, options.server_injection, k);
  tr.state_sent("server1", "user", log_d);
  tr.state_sent("server2", "user", log_d);
  tr.state_sent("server1", "user", log_d);
  tr.state_sent("server2", "user", log_d);
  result.ledger.qubits_down += 4 * log_d;

  // The pair whose exponent includes the target exactly once carries |U_k>>;
  // the other carries |U_k^+>>.
  const bool target_on_q = qp.q.at(k);
  QuantumRegister selected = target_on_q ? pair_q : pair_t;
  QuantumRegister other = target_on_q ? pair_t : pair_q;

  tr.pass_boundary();
  result.ledger.passes = 1;
  tr.output(std::string("selected pair ") + (target_on_q ? "(A, A')" : "(B, B')"));

  result.output_fidelity = fidelity_up_to_phase(
      selected, QuantumRegister::vectorized(messages.message(k),
                                            selected.labels()[0],
                                            selected.labels()[1]));
  result.output = std::move(selected);
  result.secondary_output = std::move(other);
  result.success = true;
  return result;
}

std::pair<bool, std::optional<QuantumRegister>> postselect_column(
    const QuantumRegister& pair, RandomStream& rng) {
  if (pair.qudit_count() != 2) {
    throw std::invalid_argument("postselect_column: expected a two-qudit pair");
  }
  auto [outcome, post] = measure_computational(pair, pair.labels()[1], rng);
  if (outcome != 0) return {false, std::nullopt};
  return {true, std::move(post)};
}

SessionResult run_protocol2_postselected(const MessageSet& messages, int k,
                                         RandomStream& rng,
                                         const SessionOptions& options) {
  const int d = messages.d();
  const int max_rounds =
      options.max_passes > 0 ? options.max_passes : 64 * d;

  SessionResult result;
  for (int round = 1; round <= max_rounds; ++round) {
    SessionOptions inner = options;
    inner.max_passes = 0;
    SessionResult run = run_protocol2(messages, k, rng, inner);
    result.ledger += run.ledger;
    for (auto& e : run.transcript.events) {
      result.transcript.events.push_back(std::move(e));
    }
    result.queries = run.queries;

    auto [ok, column] = postselect_column(*run.output, rng);
    result.transcript.measurement("user", {ok ? 0 : 1},
                                  "column postselection");
    if (!ok) continue;

    const CMatrix& u = messages.message(k);
    result.output_fidelity = fidelity_up_to_phase(
        *column, QuantumRegister::single(u.col(0), column->labels()[0]));
    result.output = std::move(column);
    result.success = true;
    result.transcript.output("column state U_k|0> delivered");
    return result;
  }
  return result;  // success = false; ledger and transcript remain valid
}

}  // namespace qpir
