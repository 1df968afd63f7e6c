#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpir/harness.hpp"

namespace qpir {

// One named audit check with a verdict of PASS, FAIL, INCONCLUSIVE, or N/A.
// INCONCLUSIVE means the check could not converge within its declared bounds
// and must never be read as a pass.
struct AuditSection {
  std::string name;
  std::string verdict;
  std::vector<std::string> lines;
};

struct AuditReport {
  std::string title;
  std::vector<AuditSection> sections;

  void add(AuditSection section) { sections.push_back(std::move(section)); }
  bool all_pass() const;
  std::string render() const;
};

// User secrecy: exact enumeration of the per-server query views over all 2^F
// uniform queries (F <= 12), checking (i) each per-server marginal is uniform,
// (ii) the marginal is identical for every target k (total-variation distance
// exactly 0, reported as a rational), and (iii) the query pair carries the
// complement structure q + q' = e_k. Beyond F = 12 a seeded Monte Carlo
// estimate with a stated confidence bound is used instead.
AuditReport audit_user_secrecy(const ProtocolConfig& config, int f,
                               std::uint64_t seed = 1);

// Server secrecy: for `pair_count` random message tuples agreeing at position
// k, the exact query-averaged ensemble delivered to the user must be
// identical (trace distance <= 1e-9). Repeat-until-success protocols are
// audited per delivered pass/request; the multi-pass composition additionally
// needs the pass-count distribution to be message-independent, checked from
// the exact per-pass acceptance probabilities and truncated at
// `truncation_depth` passes (INCONCLUSIVE if the geometric tail mass at that
// depth exceeds 1e-4).
AuditReport audit_server_secrecy(const ProtocolConfig& config, int f, int d,
                                 int k, int pair_count, int truncation_depth,
                                 std::uint64_t seed);

// Correctness: exhaustive branch enumeration (bounded at 1e4 branches) of
// delivered outputs for every query and target, reporting exact success
// probabilities and per-branch fidelities.
AuditReport audit_correctness(const ProtocolConfig& config,
                              const MessageSet& messages, int k = 0);

}  // namespace qpir
