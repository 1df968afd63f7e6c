#pragma once

#include <string>

#include <json.hpp>

#include "qpir/audit.hpp"
#include "qpir/harness.hpp"
#include "qpir/messages.hpp"

namespace qpir {

// -------------------------------------------------------------------------
// Message files (schema "qpir-messages/1")
//
// {
//   "schema": "qpir-messages/1",
//   "kind": "pure-states" | "unitaries" | "density-matrices",
//   "d": 2            // or "dims": [2, 3, 2] (pure states / densities only)
//   "messages": [ ... ]
// }
//
// A pure state is an array of d entries [re, im]; a unitary or density
// matrix is an array of d rows, each an array of d entries [re, im].
// Loader errors name the offending message / row / entry.

MessageSet message_set_from_json(const nlohmann::json& j);
nlohmann::json message_set_to_json(const MessageSet& messages);

MessageSet load_message_file(const std::string& path);
void save_message_file(const std::string& path, const MessageSet& messages);

// -------------------------------------------------------------------------
// Run and audit reports (schema "qpir-report/1")

struct RunReport {
  ProtocolConfig config;
  int f = 0;
  std::vector<int> dims;
  int k = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  TrialStats stats;
  AnalyticCosts analytic;
};

nlohmann::json ledger_means_to_json(const TrialStats& stats);
nlohmann::json run_report_to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::json& j);
nlohmann::json audit_report_to_json(const AuditReport& report);

// Human-readable table: measured means next to the analytic expectations.
std::string render_run_report(const RunReport& report);

// Analytic-costs table for the costs subcommand.
std::string render_costs(const ProtocolConfig& config,
                         const std::vector<int>& dims);

}  // namespace qpir
