#include <cmath>
#include <stdexcept>

#include "qpir/density.hpp"
#include "qpir/linalg.hpp"
#include "qpir/pauli.hpp"
#include "qpir/protocols.hpp"

namespace qpir {

TeleportResult teleport(const QuantumRegister& reg,
                        const std::string& message_qudit,
                        const std::string& pair_server_half,
                        RandomStream& rng) {
  // Measuring (server half, message) in that slot order makes the receiver
  // half carry exactly X^a Z^{-b} |psi> for outcome (a, b).
  auto [outcome, post] = bell_measure(reg, pair_server_half, message_qudit, rng);
  return TeleportResult{outcome, std::move(post)};
}

int bell_record_width(const std::vector<int>& dims) {
  int width = 1;
  for (int d : dims) {
    int w = 0;
    while ((1 << w) < d) ++w;
    width = std::max(width, w);
  }
  return width;
}

ClassicalRecordSet encode_bell_records(const std::vector<BellOutcome>& outcomes,
                                       const std::vector<int>& dims) {
  if (outcomes.size() != dims.size()) {
    throw std::invalid_argument("encode_bell_records: size mismatch");
  }
  const int w = bell_record_width(dims);
  ClassicalRecordSet set;
  set.record_bits = 2 * w;
  set.records.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    auto bits = encode_be(static_cast<std::uint64_t>(o.a), w);
    const auto tail = encode_be(static_cast<std::uint64_t>(o.b), w);
    bits.insert(bits.end(), tail.begin(), tail.end());
    set.records.push_back(std::move(bits));
  }
  return set;
}

SessionResult run_protocol1(const MessageSet& messages, int k,
                            CpirScheme scheme, RandomStream& rng,
                            const SessionOptions& options) {
  if (messages.kind() == MessageKind::kUnitaries) {
    throw std::invalid_argument(
        "run_protocol1: messages must be pure states or density matrices");
  }
  const int f = messages.f();
  if (k < 1 || k > f) {
    throw std::out_of_range("run_protocol1: index " + std::to_string(k) +
                            " outside [1, " + std::to_string(f) + "]");
  }
  const bool mixed = messages.kind() == MessageKind::kDensityMatrices;

  SessionResult result;
  Transcript& tr = result.transcript;

  // Each message block (X_l, Y_l, Y'_l) [plus a held reference R_l for mixed
  // messages] evolves independently of every other block.
  std::vector<QuantumRegister> blocks;
  std::vector<QuantumRegister> targets;  // what the corrected block should hold
  blocks.reserve(f);
  for (int l = 1; l <= f; ++l) {
    const int d = messages.dims()[l - 1];
    QuantumRegister source =
        mixed ? purify(DensityMatrix({d}, {"rho"}, messages.message(l)), "R", "X")
              : QuantumRegister::single(messages.message(l).col(0), "X");
    targets.push_back(source.renamed("X", "Y"));
    QuantumRegister pair = QuantumRegister::max_entangled(d, "Y", "Y'");
    tr.pair_shared(std::log2(static_cast<double>(d)),
                   "user/server pair, message " + std::to_string(l));
    result.ledger.ebits += std::log2(static_cast<double>(d));
    blocks.push_back(tensor_product(source, pair));
  }

  // Server-side Bell measurements destroy every block's source state and
  // leave the user halves holding byproduct-rotated messages.
  std::vector<BellOutcome> outcomes;
  outcomes.reserve(f);
  for (int l = 1; l <= f; ++l) {
    auto tp = teleport(blocks[l - 1], "X", "Y'", rng);
    tr.measurement("server1", {tp.outcome.a, tp.outcome.b},
                   "message " + std::to_string(l) + " collapsed");
    outcomes.push_back(tp.outcome);
    blocks[l - 1] = std::move(tp.state);
  }

  // Classical retrieval of the target record (a_k, b_k).
  const auto records = encode_bell_records(outcomes, messages.dims());
  const auto cpir = pir_retrieve(scheme, records, k, rng);
  for (const auto& leg : cpir.legs) {
    if (leg.uplink) {
      tr.classical("user", leg.party, leg.bits);
      result.ledger.classical_bits_up += leg.bits;
    } else {
      tr.classical(leg.party, "user", leg.bits);
      result.ledger.classical_bits_down += leg.bits;
    }
  }
  const int w = bell_record_width(messages.dims());
  const int a = static_cast<int>(decode_be(cpir.record, 0, w));
  const int b = static_cast<int>(decode_be(cpir.record, w, w));

  // Undo the byproduct on the target half only.
  const int dk = messages.dims()[k - 1];
  QuantumRegister out = apply_operator(
      blocks[k - 1], pauli_xz(dk, -a, 0) * pauli_xz(dk, 0, b), {"Y"});
  tr.pass_boundary();
  result.ledger.passes = 1;
  tr.output("message " + std::to_string(k) + " corrected on the user half");

  result.output_fidelity = fidelity_up_to_phase(out, targets[k - 1]);
  result.output = std::move(out);
  result.success = true;
  (void)options;
  return result;
}

}  // namespace qpir
