#include "qpir/protocols.hpp"

#include <stdexcept>

namespace qpir {

std::string to_string(ProtocolId id) {
  switch (id) {
    case ProtocolId::kTeleport: return "teleport";
    case ProtocolId::kCommutative: return "commutative";
    case ProtocolId::kQubit: return "qubit";
    case ProtocolId::kQudit: return "qudit";
  }
  return "?";
}

std::optional<ProtocolId> protocol_from_string(const std::string& name) {
  if (name == "teleport") return ProtocolId::kTeleport;
  if (name == "commutative") return ProtocolId::kCommutative;
  if (name == "qubit") return ProtocolId::kQubit;
  if (name == "qudit") return ProtocolId::kQudit;
  return std::nullopt;
}

std::string to_string(MergeMode mode) {
  return mode == MergeMode::kStrict ? "strict" : "paper-literal";
}

std::optional<MergeMode> merge_mode_from_string(const std::string& name) {
  if (name == "strict") return MergeMode::kStrict;
  if (name == "paper-literal") return MergeMode::kPaperLiteral;
  return std::nullopt;
}

QueryPair query_pair_from(const SubsetQuery& q, int k,
                          QueryInjection injection) {
  const int f = q.f();
  if (k < 1 || k > f) {
    throw std::out_of_range("query_pair_from: index " + std::to_string(k) +
                            " outside [1, " + std::to_string(f) + "]");
  }
  QueryPair qp;
  qp.q = q;
  qp.q_prime = complement_query(q, k);
  if (injection == QueryInjection::kBrokenQuery) {
    // Defective second query: also toggles the neighbor position, breaking the
    // q + q' = e_k pair structure while every marginal stays uniform.
    qp.q_prime = complement_query(qp.q_prime, k % f + 1);
  }
  qp.t = negate_query(qp.q);
  qp.t_prime = negate_query(qp.q_prime);
  return qp;
}

QueryPair make_query_pair(int f, int k, RandomStream& rng,
                          QueryInjection injection) {
  return query_pair_from(random_query(f, rng), k, injection);
}

}  // namespace qpir
