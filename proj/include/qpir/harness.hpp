#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpir/protocols.hpp"

namespace qpir {

// Everything needed to run one protocol session besides the messages.
struct ProtocolConfig {
  ProtocolId protocol = ProtocolId::kQubit;
  CpirScheme cpir = CpirScheme::kTwoServerXor;  // teleport only
  MergeMode mode = MergeMode::kStrict;          // qudit only
  int max_passes = 0;
  QueryInjection query_injection = QueryInjection::kNone;
  ServerInjection server_injection = ServerInjection::kNone;
  // Report quantum costs as if shared pairs were uploaded at run time
  // (each ebit adds two transmitted qubits; no prior entanglement).
  bool upload_entanglement = false;
};

SessionResult run_session(const ProtocolConfig& config,
                          const MessageSet& messages, int k, RandomStream& rng);

// Closed-form expectations for the configured protocol, matching the
// implemented acceptance probabilities.
struct AnalyticCosts {
  double bits_up = 0.0;
  double bits_down = 0.0;
  double pass_probability = 1.0;  // per pass / generation cycle
  double expected_passes = 1.0;
  double qubits_per_pass = 0.0;  // expected, per pass / generation cycle
  double ebits_per_pass = 0.0;
  // Headline average figures (the per-cycle accounting for the qudit
  // protocol, session totals for everything else).
  double expected_qubits = 0.0;
  double expected_ebits = 0.0;
  // Session totals to final success where they differ from the headline.
  double session_qubits = 0.0;
  double session_ebits = 0.0;
  // Qudit extras: the d-pairs-per-attempt upper-bound figure and the
  // always-converging-chain figure.
  double bound_qubits = -1.0;
  double literal_reference_qubits = -1.0;
};

AnalyticCosts analytic_costs(const ProtocolConfig& config,
                             const std::vector<int>& dims);

// (qubits, ebits) under the configured accounting: with upload-entanglement
// accounting every ebit is replaced by two transmitted qubits.
std::pair<double, double> accounted_quantum(double qubits, double ebits,
                                            bool upload_entanglement);

// The same accounting applied to every quantum figure of a cost table.
AnalyticCosts with_upload_accounting(AnalyticCosts costs);

// Aggregates over seeded trials; trial t uses the child stream
// RandomStream::child(master_seed, t), so results are reproducible
// bit-for-bit.
struct TrialStats {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  std::int64_t total_passes = 0;
  double mean_passes = 0.0;
  double mean_bits_up = 0.0;
  double mean_bits_down = 0.0;
  double mean_qubits = 0.0;
  double mean_ebits = 0.0;
  double min_fidelity = 1.0;   // over successful sessions
  double mean_fidelity = 0.0;
  double pass_success_rate = 0.0;  // successes / total passes
  double qubits_per_pass = 0.0;    // total qubits / total passes
  // Qudit extras.
  std::int64_t chain_attempts = 0;
  std::int64_t chains_completed = 0;
  double chain_success_rate = 0.0;
  std::int64_t tail_sessions = 0;            // successes with a nonzero late alpha
  std::int64_t tail_low_fidelity_sessions = 0;  // ... and fidelity < 0.99
  std::int64_t discrepancy_sessions = 0;     // ... and fidelity < 1 - 1e-9
  std::vector<std::string> anomalies;
};

TrialStats run_trials(const ProtocolConfig& config, const MessageSet& messages,
                      int k, int trials, std::uint64_t master_seed);

}  // namespace qpir
