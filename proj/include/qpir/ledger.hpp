#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qpir {

// Monotone resource counters for one protocol session. Classical counts are
// exact bit totals; quantum counts are log2-weighted (qubits, ebits) so a
// d-dimensional qudit contributes log2 d.
struct ResourceLedger {
  std::int64_t classical_bits_up = 0;
  std::int64_t classical_bits_down = 0;
  double qubits_down = 0.0;
  double ebits = 0.0;
  std::int64_t passes = 0;

  ResourceLedger& operator+=(const ResourceLedger& other) {
    classical_bits_up += other.classical_bits_up;
    classical_bits_down += other.classical_bits_down;
    qubits_down += other.qubits_down;
    ebits += other.ebits;
    passes += other.passes;
    return *this;
  }
};

bool ledgers_equal(const ResourceLedger& a, const ResourceLedger& b,
                   double quantum_tolerance = 1e-9);

enum class EventKind {
  kClassical,    // from -> to, classical bits
  kStateSent,    // from -> to, qubits (log2-weighted)
  kPairShared,   // entanglement resource established, ebits (no direction)
  kMeasurement,  // party, outcomes
  kPassBoundary,
  kOutput,
};

std::string to_string(EventKind kind);

struct TranscriptEvent {
  EventKind kind;
  std::string from;  // kMeasurement: the measuring party
  std::string to;
  std::int64_t classical_bits = 0;
  double qubits = 0.0;
  double ebits = 0.0;
  std::vector<int> outcomes;
  std::string note;
};

// Ordered event log of one session. The ledger is reproduced exactly by
// folding the events: classical bits split by direction (to the user counts
// down, away from the user counts up), state transfers add qubits, shared
// pairs add ebits, pass boundaries count passes.
struct Transcript {
  std::vector<TranscriptEvent> events;

  void classical(const std::string& from, const std::string& to,
                 std::int64_t bits);
  void state_sent(const std::string& from, const std::string& to,
                  double qubits);
  void pair_shared(double ebits, const std::string& note = "");
  void measurement(const std::string& party, std::vector<int> outcomes,
                   const std::string& note = "");
  void pass_boundary();
  void output(const std::string& note);

  std::string render() const;
};

ResourceLedger fold_transcript(const Transcript& transcript);

// True when no classical or quantum transfer event runs between two servers.
bool channel_discipline_ok(const Transcript& transcript);

}  // namespace qpir
