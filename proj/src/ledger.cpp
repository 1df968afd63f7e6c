#include "qpir/ledger.hpp"

#include <cmath>

#include <fmt/format.h>

namespace qpir {

bool ledgers_equal(const ResourceLedger& a, const ResourceLedger& b,
                   double quantum_tolerance) {
  return a.classical_bits_up == b.classical_bits_up &&
         a.classical_bits_down == b.classical_bits_down &&
         a.passes == b.passes &&
         std::abs(a.qubits_down - b.qubits_down) <= quantum_tolerance &&
         std::abs(a.ebits - b.ebits) <= quantum_tolerance;
}

std::string to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kClassical: return "classical";
    case EventKind::kStateSent: return "state";
    case EventKind::kPairShared: return "pair";
    case EventKind::kMeasurement: return "measure";
    case EventKind::kPassBoundary: return "pass";
    case EventKind::kOutput: return "output";
  }
  return "?";
}

void Transcript::classical(const std::string& from, const std::string& to,
                           std::int64_t bits) {
  TranscriptEvent e;
  e.kind = EventKind::kClassical;
  e.from = from;
  e.to = to;
  e.classical_bits = bits;
  events.push_back(std::move(e));
}

void Transcript::state_sent(const std::string& from, const std::string& to,
                            double qubits) {
  TranscriptEvent e;
  e.kind = EventKind::kStateSent;
  e.from = from;
  e.to = to;
  e.qubits = qubits;
  events.push_back(std::move(e));
}

void Transcript::pair_shared(double ebits, const std::string& note) {
  TranscriptEvent e;
  e.kind = EventKind::kPairShared;
  e.ebits = ebits;
  e.note = note;
  events.push_back(std::move(e));
}

void Transcript::measurement(const std::string& party, std::vector<int> outcomes,
                             const std::string& note) {
  TranscriptEvent e;
  e.kind = EventKind::kMeasurement;
  e.from = party;
  e.outcomes = std::move(outcomes);
  e.note = note;
  events.push_back(std::move(e));
}

void Transcript::pass_boundary() {
  TranscriptEvent e;
  e.kind = EventKind::kPassBoundary;
  events.push_back(std::move(e));
}

void Transcript::output(const std::string& note) {
  TranscriptEvent e;
  e.kind = EventKind::kOutput;
  e.note = note;
  events.push_back(std::move(e));
}

std::string Transcript::render() const {
  std::string out;
  for (const auto& e : events) {
    switch (e.kind) {
      case EventKind::kClassical:
        out += fmt::format("classical {} -> {}: {} bits\n", e.from, e.to,
                           e.classical_bits);
        break;
      case EventKind::kStateSent:
        out += fmt::format("state {} -> {}: {:.6g} qubits\n", e.from, e.to,
                           e.qubits);
        break;
      case EventKind::kPairShared:
        out += fmt::format("pair shared: {:.6g} ebits{}\n", e.ebits,
                           e.note.empty() ? "" : " (" + e.note + ")");
        break;
      case EventKind::kMeasurement: {
        std::string o;
        for (std::size_t i = 0; i < e.outcomes.size(); ++i) {
          o += (i ? "," : "") + std::to_string(e.outcomes[i]);
        }
        out += fmt::format("measure [{}] ({}){}\n", e.from, o,
                           e.note.empty() ? "" : " " + e.note);
        break;
      }
      case EventKind::kPassBoundary:
        out += "pass\n";
        break;
      case EventKind::kOutput:
        out += fmt::format("output: {}\n", e.note);
        break;
    }
  }
  return out;
}

ResourceLedger fold_transcript(const Transcript& transcript) {
  ResourceLedger ledger;
  for (const auto& e : transcript.events) {
    switch (e.kind) {
      case EventKind::kClassical:
        if (e.to == "user") {
          ledger.classical_bits_down += e.classical_bits;
        } else {
          ledger.classical_bits_up += e.classical_bits;
        }
        break;
      case EventKind::kStateSent:
        ledger.qubits_down += e.qubits;
        break;
      case EventKind::kPairShared:
        ledger.ebits += e.ebits;
        break;
      case EventKind::kPassBoundary:
        ledger.passes += 1;
        break;
      default:
        break;
    }
  }
  return ledger;
}

bool channel_discipline_ok(const Transcript& transcript) {
  for (const auto& e : transcript.events) {
    if (e.kind != EventKind::kClassical && e.kind != EventKind::kStateSent) {
      continue;
    }
    const bool from_server = e.from.rfind("server", 0) == 0;
    const bool to_server = e.to.rfind("server", 0) == 0;
    if (from_server && to_server) return false;
  }
  return true;
}

}  // namespace qpir
