#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qpir/classical_pir.hpp"
#include "qpir/ledger.hpp"
#include "qpir/messages.hpp"
#include "qpir/register.hpp"
#include "qpir/rng.hpp"
#include "qpir/rotation.hpp"

namespace qpir {

enum class ProtocolId { kTeleport, kCommutative, kQubit, kQudit };

std::string to_string(ProtocolId id);
std::optional<ProtocolId> protocol_from_string(const std::string& name);

// Merge acceptance for the qudit protocol.
//   strict:        after the first merge, only the (0, 0) outcome is accepted,
//                  so the final phase correction is provably exact.
//   paper-literal: any (0, alpha) outcome is accepted and the final correction
//                  assumes all phase byproducts commute through the remaining
//                  rotations; for d >= 3 that assumption fails and the output
//                  fidelity drops below 1 whenever a later alpha is nonzero.
enum class MergeMode { kStrict, kPaperLiteral };

std::string to_string(MergeMode mode);
std::optional<MergeMode> merge_mode_from_string(const std::string& name);

// Fault injections for negative-control audits.
enum class QueryInjection { kNone, kBrokenQuery };      // q' = q + e_k + e_{k+1}
enum class ServerInjection { kNone, kLeakyServer };     // server 1 applies a
                                                        // target-adjacent extra op

// The two-server query pair: q uniform, q' = q + e_k, plus their bitwise
// complements t, t' used on the conjugate register side.
struct QueryPair {
  SubsetQuery q;
  SubsetQuery q_prime;
  SubsetQuery t;
  SubsetQuery t_prime;
};

QueryPair query_pair_from(const SubsetQuery& q, int k,
                          QueryInjection injection = QueryInjection::kNone);
QueryPair make_query_pair(int f, int k, RandomStream& rng,
                          QueryInjection injection = QueryInjection::kNone);

struct SessionOptions {
  int max_passes = 0;  // 0: 64 x the expected pass count for the protocol
  std::optional<SubsetQuery> forced_query;
  QueryInjection query_injection = QueryInjection::kNone;
  ServerInjection server_injection = ServerInjection::kNone;
};

// Extra bookkeeping for the qudit protocol.
struct Protocol4Detail {
  std::vector<int> alphas;  // phase outcomes of the surviving forward chain
  std::vector<int> betas;   // phase outcomes of the surviving mirror chain
  std::int64_t chain_attempts = 0;   // both chains, all generation cycles
  std::int64_t chains_completed = 0;
  bool tail_alpha_nonzero = false;   // some alpha_s != 0 beyond the first merge
  bool literal_discrepancy = false;  // tail alpha produced fidelity < 1
};

struct SessionResult {
  bool success = false;
  std::optional<QuantumRegister> output;
  // Commutative protocol: the unselected pair (carries the adjoint message).
  std::optional<QuantumRegister> secondary_output;
  std::optional<QueryPair> queries;
  ResourceLedger ledger;
  Transcript transcript;
  double output_fidelity = std::numeric_limits<double>::quiet_NaN();
  std::optional<Protocol4Detail> p4;
};

// -------------------------------------------------------------------------
// Teleportation building block

struct TeleportResult {
  BellOutcome outcome;
  QuantumRegister state;  // receiver half carries the X^a Z^{-b} byproduct
};

// Bell-measures (pair-server-half, message-qudit) in that order; the receiver
// half of the pair is left holding X^a Z^{-b} |psi> (uncorrected).
TeleportResult teleport(const QuantumRegister& reg,
                        const std::string& message_qudit,
                        const std::string& pair_server_half, RandomStream& rng);

// -------------------------------------------------------------------------
// Per-query answer-state builders (shared by the runners and the audits)

// Decomposed message angles for the rotation-based protocols.
struct AngleSet {
  int d = 2;
  int f = 0;
  PhaseConvention convention = PhaseConvention::kQubitSymmetric;
  std::vector<StateParams> params;  // one per message
};

AngleSet decompose_messages(const MessageSet& messages,
                            PhaseConvention convention);

// Commutative protocol: the two answer pairs. First pair (A, A') holds
// |U^q (U^+)^{q'}>>, second pair (B, B') holds |U^t (U^+)^{t'}>>.
std::pair<QuantumRegister, QuantumRegister> protocol2_answer_states(
    const MessageSet& messages, const QueryPair& qp,
    ServerInjection injection = ServerInjection::kNone, int k = 0);

// Qubit protocol: per-pass answer pairs (A, A') = rotation side and
// (B, B') = phase side.
std::pair<QuantumRegister, QuantumRegister> protocol3_answer_states(
    const AngleSet& angles, const QueryPair& qp,
    ServerInjection injection = ServerInjection::kNone, int k = 0);

// Qudit protocol: one requested pair. A request is a public (type, flip)
// role: the phase request with flip f yields |S((-1)^{q_k+1+f} phi_k)>> and
// the rotation-s request yields |R_s((-1)^{q_k+f} theta_k^s)>>.
struct PairRequest {
  bool phase = false;  // true: S-request, false: R_s-request
  int s = 0;           // rotation level for R_s requests
  int flip = 0;        // 0 or 1 (sign role)
};

QuantumRegister protocol4_request_state(const AngleSet& angles,
                                        const QueryPair& qp,
                                        const PairRequest& request,
                                        const std::string& label_a,
                                        const std::string& label_b);

// Canonical request roles of one chain, in request order (phase first, then
// rotation levels d-1 down to 1); flips are left 0 for the caller to set.
std::vector<PairRequest> protocol4_request_roles(int d);

// One accepted way a chain can complete: the per-merge phase outcomes, the
// exact joint probability of that path, and the accumulated pair state.
struct ChainBranch {
  std::vector<int> alphas;
  double probability = 0.0;
  QuantumRegister state;
};

// Exact enumeration of every accepted chain path for one sign role.
std::vector<ChainBranch> protocol4_chain_branches(const AngleSet& angles,
                                                  const QueryPair& qp, int flip,
                                                  MergeMode mode);

// -------------------------------------------------------------------------
// Protocol runners

// Teleportation protocol with a pluggable classical retrieval scheme.
SessionResult run_protocol1(const MessageSet& messages, int k,
                            CpirScheme scheme, RandomStream& rng,
                            const SessionOptions& options = {});

// Commutative-unitary protocol (deterministic, one pass).
SessionResult run_protocol2(const MessageSet& messages, int k,
                            RandomStream& rng,
                            const SessionOptions& options = {});

// Qubit protocol (repeat until success, exact per-pass probability 1/2).
SessionResult run_protocol3(const MessageSet& messages, int k,
                            RandomStream& rng,
                            const SessionOptions& options = {});

// Qudit protocol (merge chains plus a final column measurement).
SessionResult run_protocol4(const MessageSet& messages, int k, MergeMode mode,
                            RandomStream& rng,
                            const SessionOptions& options = {});

// Column postselection: measures the second qudit of a two-qudit pair state;
// success means outcome 0 (probability exactly 1/d for a vectorized unitary),
// leaving the first qudit in U|0>.
std::pair<bool, std::optional<QuantumRegister>> postselect_column(
    const QuantumRegister& pair, RandomStream& rng);

// Commutative protocol composed with column postselection, repeated until
// success; realizes blind retrieval of U_k|0> at average quantum cost
// d * (one commutative run).
SessionResult run_protocol2_postselected(const MessageSet& messages, int k,
                                         RandomStream& rng,
                                         const SessionOptions& options = {});

// -------------------------------------------------------------------------
// Analytic figures derived from the implemented acceptance rules

// Exact one-pass success probability of the qubit protocol by branch
// enumeration (analytically 1/2 for every message set and query).
double protocol3_pass_probability(const AngleSet& angles, int k,
                                  const SubsetQuery& q);

// Probability that one chain attempt of the qudit protocol completes.
double protocol4_chain_success_probability(int d, MergeMode mode);

// Expected entangled pairs consumed by one chain attempt (early abort counted).
double protocol4_expected_pairs_per_attempt(int d, MergeMode mode);

// Expected entangled pairs consumed until one chain completes.
double protocol4_expected_pairs_per_chain(int d, MergeMode mode);

// Record encoding for the teleportation protocol: each record packs (a, b)
// big-endian at the maximum per-coordinate width across messages.
ClassicalRecordSet encode_bell_records(const std::vector<BellOutcome>& outcomes,
                                       const std::vector<int>& dims);
int bell_record_width(const std::vector<int>& dims);

}  // namespace qpir
