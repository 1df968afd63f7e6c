#include "qpir/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace qpir {

namespace {

using nlohmann::json;

Complex parse_entry(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(where + ": expected [re, im]");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json entry_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

MessageKind kind_from_string(const std::string& name) {
  if (name == "pure-states") return MessageKind::kPureStates;
  if (name == "unitaries") return MessageKind::kUnitaries;
  if (name == "density-matrices") return MessageKind::kDensityMatrices;
  throw std::invalid_argument(
      "message file: unknown kind \"" + name +
      "\" (expected pure-states, unitaries, or density-matrices)");
}

std::string fmt_quantum(double qubits, double ebits) {
  return fmt::format("{:>10.4f} qubits  {:>10.4f} ebits", qubits, ebits);
}

}  // namespace

MessageSet message_set_from_json(const json& j) {
  if (!j.is_object()) {
    throw std::invalid_argument("message file: top level must be an object");
  }
  if (j.value("schema", "") != std::string("qpir-messages/1")) {
    throw std::invalid_argument(
        "message file: missing or unsupported schema (expected "
        "\"qpir-messages/1\")");
  }
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("message file: missing \"kind\" string");
  }
  const MessageKind kind = kind_from_string(j["kind"].get<std::string>());
  if (!j.contains("messages") || !j["messages"].is_array() ||
      j["messages"].empty()) {
    throw std::invalid_argument(
        "message file: \"messages\" must be a non-empty array");
  }
  const auto& msgs = j["messages"];
  const int f = static_cast<int>(msgs.size());

  std::vector<int> dims;
  if (j.contains("dims")) {
    if (!j["dims"].is_array() || static_cast<int>(j["dims"].size()) != f) {
      throw std::invalid_argument(
          "message file: \"dims\" must list one dimension per message");
    }
    for (const auto& dj : j["dims"]) {
      if (!dj.is_number_integer() || dj.get<int>() < 2) {
        throw std::invalid_argument(
            "message file: every dimension must be an integer >= 2");
      }
      dims.push_back(dj.get<int>());
    }
  } else if (j.contains("d")) {
    if (!j["d"].is_number_integer() || j["d"].get<int>() < 2) {
      throw std::invalid_argument(
          "message file: \"d\" must be an integer >= 2");
    }
    dims.assign(f, j["d"].get<int>());
  } else {
    throw std::invalid_argument("message file: provide \"d\" or \"dims\"");
  }

  std::vector<CMatrix> payload;
  for (int l = 0; l < f; ++l) {
    const std::string where = "message " + std::to_string(l + 1);
    const int d = dims[l];
    const auto& mj = msgs[l];
    if (!mj.is_array()) {
      throw std::invalid_argument("message file: " + where +
                                  " must be an array");
    }
    if (kind == MessageKind::kPureStates) {
      if (static_cast<int>(mj.size()) != d) {
        throw std::invalid_argument(fmt::format(
            "message file: {} has {} amplitudes, expected {}", where,
            mj.size(), d));
      }
      CMatrix m(d, 1);
      for (int s = 0; s < d; ++s) {
        m(s, 0) = parse_entry(mj[s], fmt::format("{}, entry {}", where, s + 1));
      }
      payload.push_back(std::move(m));
    } else {
      if (static_cast<int>(mj.size()) != d) {
        throw std::invalid_argument(fmt::format(
            "message file: {} has {} rows, expected {}", where, mj.size(), d));
      }
      CMatrix m(d, d);
      for (int r = 0; r < d; ++r) {
        const auto& rj = mj[r];
        if (!rj.is_array() || static_cast<int>(rj.size()) != d) {
          throw std::invalid_argument(fmt::format(
              "message file: {}, row {} must have {} entries", where, r + 1, d));
        }
        for (int c = 0; c < d; ++c) {
          m(r, c) = parse_entry(
              rj[c], fmt::format("{}, row {}, column {}", where, r + 1, c + 1));
        }
      }
      payload.push_back(std::move(m));
    }
  }
  return MessageSet(kind, std::move(dims), std::move(payload));
}

json message_set_to_json(const MessageSet& messages) {
  json j;
  j["schema"] = "qpir-messages/1";
  j["kind"] = to_string(messages.kind());
  if (messages.common_dim()) {
    j["d"] = messages.dims().front();
  } else {
    j["dims"] = messages.dims();
  }
  json msgs = json::array();
  for (int l = 1; l <= messages.f(); ++l) {
    const CMatrix& m = messages.message(l);
    if (messages.kind() == MessageKind::kPureStates) {
      json vec = json::array();
      for (Index s = 0; s < m.rows(); ++s) vec.push_back(entry_to_json(m(s, 0)));
      msgs.push_back(std::move(vec));
    } else {
      json rows = json::array();
      for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(entry_to_json(m(r, c)));
        rows.push_back(std::move(row));
      }
      msgs.push_back(std::move(rows));
    }
  }
  j["messages"] = std::move(msgs);
  return j;
}

MessageSet load_message_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open message file: " + path);
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return message_set_from_json(j);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_message_file(const std::string& path, const MessageSet& messages) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write message file: " + path);
  }
  out << message_set_to_json(messages).dump(2) << "\n";
}

json ledger_means_to_json(const TrialStats& stats) {
  return json{{"classical_bits_up", stats.mean_bits_up},
              {"classical_bits_down", stats.mean_bits_down},
              {"qubits_down", stats.mean_qubits},
              {"ebits", stats.mean_ebits},
              {"passes", stats.mean_passes}};
}

json run_report_to_json(const RunReport& report) {
  json j;
  j["schema"] = "qpir-report/1";
  j["kind"] = "run";
  json cfg;
  cfg["protocol"] = to_string(report.config.protocol);
  if (report.config.protocol == ProtocolId::kTeleport) {
    cfg["cpir"] = to_string(report.config.cpir);
  }
  if (report.config.protocol == ProtocolId::kQudit) {
    cfg["mode"] = to_string(report.config.mode);
  }
  cfg["upload_entanglement"] = report.config.upload_entanglement;
  if (report.config.query_injection == QueryInjection::kBrokenQuery) {
    cfg["query_injection"] = "broken-query";
  }
  if (report.config.server_injection == ServerInjection::kLeakyServer) {
    cfg["server_injection"] = "leaky-server";
  }
  j["config"] = std::move(cfg);
  j["f"] = report.f;
  j["dims"] = report.dims;
  j["k"] = report.k;
  j["trials"] = report.trials;
  j["seed"] = report.seed;

  const TrialStats& s = report.stats;
  json stats;
  stats["successes"] = s.successes;
  stats["total_passes"] = s.total_passes;
  stats["means"] = ledger_means_to_json(s);
  stats["min_fidelity"] = s.min_fidelity;
  stats["mean_fidelity"] = s.mean_fidelity;
  stats["pass_success_rate"] = s.pass_success_rate;
  stats["qubits_per_pass"] = s.qubits_per_pass;
  if (report.config.protocol == ProtocolId::kQudit) {
    stats["chain_attempts"] = s.chain_attempts;
    stats["chains_completed"] = s.chains_completed;
    stats["chain_success_rate"] = s.chain_success_rate;
    stats["tail_sessions"] = s.tail_sessions;
    stats["tail_low_fidelity_sessions"] = s.tail_low_fidelity_sessions;
    stats["discrepancy_sessions"] = s.discrepancy_sessions;
  }
  if (!s.anomalies.empty()) stats["anomalies"] = s.anomalies;
  j["stats"] = std::move(stats);

  const AnalyticCosts& a = report.analytic;
  json an;
  an["bits_up"] = a.bits_up;
  an["bits_down"] = a.bits_down;
  an["pass_probability"] = a.pass_probability;
  an["expected_passes"] = a.expected_passes;
  an["qubits_per_pass"] = a.qubits_per_pass;
  an["ebits_per_pass"] = a.ebits_per_pass;
  an["expected_qubits"] = a.expected_qubits;
  an["expected_ebits"] = a.expected_ebits;
  an["session_qubits"] = a.session_qubits;
  an["session_ebits"] = a.session_ebits;
  if (a.bound_qubits >= 0) an["bound_qubits"] = a.bound_qubits;
  if (a.literal_reference_qubits >= 0) {
    an["literal_reference_qubits"] = a.literal_reference_qubits;
  }
  j["analytic"] = std::move(an);
  return j;
}

RunReport run_report_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", "") != "qpir-report/1" ||
      j.value("kind", "") != "run") {
    throw std::invalid_argument(
        "run report: missing or unsupported schema (expected qpir-report/1, "
        "kind run)");
  }
  RunReport report;
  const json& cfg = j.at("config");
  const auto protocol =
      protocol_from_string(cfg.at("protocol").get<std::string>());
  if (!protocol) {
    throw std::invalid_argument("run report: unknown protocol \"" +
                                cfg.at("protocol").get<std::string>() + "\"");
  }
  report.config.protocol = *protocol;
  if (cfg.contains("cpir")) {
    report.config.cpir = cfg.at("cpir") == "trivial" ? CpirScheme::kTrivial
                                                     : CpirScheme::kTwoServerXor;
  }
  if (cfg.contains("mode")) {
    const auto mode = merge_mode_from_string(cfg.at("mode").get<std::string>());
    if (!mode) {
      throw std::invalid_argument("run report: unknown merge mode \"" +
                                  cfg.at("mode").get<std::string>() + "\"");
    }
    report.config.mode = *mode;
  }
  report.config.upload_entanglement = cfg.value("upload_entanglement", false);
  if (cfg.value("query_injection", "") == "broken-query") {
    report.config.query_injection = QueryInjection::kBrokenQuery;
  }
  if (cfg.value("server_injection", "") == "leaky-server") {
    report.config.server_injection = ServerInjection::kLeakyServer;
  }
  report.f = j.at("f").get<int>();
  report.dims = j.at("dims").get<std::vector<int>>();
  report.k = j.at("k").get<int>();
  report.trials = j.at("trials").get<int>();
  report.seed = j.at("seed").get<std::uint64_t>();

  const json& s = j.at("stats");
  TrialStats& stats = report.stats;
  stats.trials = report.trials;
  stats.successes = s.at("successes").get<std::int64_t>();
  stats.total_passes = s.at("total_passes").get<std::int64_t>();
  const json& means = s.at("means");
  stats.mean_bits_up = means.at("classical_bits_up").get<double>();
  stats.mean_bits_down = means.at("classical_bits_down").get<double>();
  stats.mean_qubits = means.at("qubits_down").get<double>();
  stats.mean_ebits = means.at("ebits").get<double>();
  stats.mean_passes = means.at("passes").get<double>();
  stats.min_fidelity = s.at("min_fidelity").get<double>();
  stats.mean_fidelity = s.at("mean_fidelity").get<double>();
  stats.pass_success_rate = s.at("pass_success_rate").get<double>();
  stats.qubits_per_pass = s.at("qubits_per_pass").get<double>();
  if (s.contains("chain_attempts")) {
    stats.chain_attempts = s.at("chain_attempts").get<std::int64_t>();
    stats.chains_completed = s.at("chains_completed").get<std::int64_t>();
    stats.chain_success_rate = s.at("chain_success_rate").get<double>();
    stats.tail_sessions = s.at("tail_sessions").get<std::int64_t>();
    stats.tail_low_fidelity_sessions =
        s.at("tail_low_fidelity_sessions").get<std::int64_t>();
    stats.discrepancy_sessions = s.at("discrepancy_sessions").get<std::int64_t>();
  }
  if (s.contains("anomalies")) {
    stats.anomalies = s.at("anomalies").get<std::vector<std::string>>();
  }

  const json& an = j.at("analytic");
  AnalyticCosts& a = report.analytic;
  a.bits_up = an.at("bits_up").get<double>();
  a.bits_down = an.at("bits_down").get<double>();
  a.pass_probability = an.at("pass_probability").get<double>();
  a.expected_passes = an.at("expected_passes").get<double>();
  a.qubits_per_pass = an.at("qubits_per_pass").get<double>();
  a.ebits_per_pass = an.at("ebits_per_pass").get<double>();
  a.expected_qubits = an.at("expected_qubits").get<double>();
  a.expected_ebits = an.at("expected_ebits").get<double>();
  a.session_qubits = an.at("session_qubits").get<double>();
  a.session_ebits = an.at("session_ebits").get<double>();
  if (an.contains("bound_qubits")) {
    a.bound_qubits = an.at("bound_qubits").get<double>();
  }
  if (an.contains("literal_reference_qubits")) {
    a.literal_reference_qubits = an.at("literal_reference_qubits").get<double>();
  }
  return report;
}

json audit_report_to_json(const AuditReport& report) {
  json j;
  j["schema"] = "qpir-report/1";
  j["kind"] = "audit";
  j["title"] = report.title;
  json sections = json::array();
  for (const auto& s : report.sections) {
    sections.push_back(
        json{{"name", s.name}, {"verdict", s.verdict}, {"lines", s.lines}});
  }
  j["sections"] = std::move(sections);
  j["all_pass"] = report.all_pass();
  return j;
}

std::string render_run_report(const RunReport& report) {
  const TrialStats& s = report.stats;
  const AnalyticCosts& a = report.analytic;
  std::string out;
  out += fmt::format("protocol {}", to_string(report.config.protocol));
  if (report.config.protocol == ProtocolId::kTeleport) {
    out += fmt::format(" (classical plugin: {})", to_string(report.config.cpir));
  }
  if (report.config.protocol == ProtocolId::kQudit) {
    out += fmt::format(" ({} merge mode)", to_string(report.config.mode));
  }
  out += fmt::format("  F = {}, k = {}, seed = {}\n", report.f, report.k,
                     report.seed);
  out += fmt::format("dims: [{}]\n", fmt::join(report.dims, ", "));
  if (report.config.upload_entanglement) {
    out += "accounting: upload entanglement (each ebit counted as two qubits)\n";
  }
  out += fmt::format("sessions: {} run, {} succeeded\n", s.trials, s.successes);
  out += fmt::format("fidelity: min {:.12f}, mean {:.12f}\n", s.min_fidelity,
                     s.mean_fidelity);
  out += "\n                     measured mean      expected\n";
  out += fmt::format("  bits up        {:>14.4f}  {:>12.4f}\n", s.mean_bits_up,
                     a.bits_up);
  out += fmt::format("  bits down      {:>14.4f}  {:>12.4f}\n",
                     s.mean_bits_down, a.bits_down);
  out += fmt::format("  qubits down    {:>14.4f}  {:>12.4f}\n", s.mean_qubits,
                     a.session_qubits);
  out += fmt::format("  ebits          {:>14.4f}  {:>12.4f}\n", s.mean_ebits,
                     a.session_ebits);
  out += fmt::format("  passes         {:>14.4f}  {:>12.4f}\n", s.mean_passes,
                     a.expected_passes);
  if (s.total_passes > 0) {
    out += fmt::format(
        "  per pass: success rate {:.4f} (expected {:.4f}), qubits {:.4f} "
        "(expected {:.4f})\n",
        s.pass_success_rate, a.pass_probability, s.qubits_per_pass,
        a.qubits_per_pass);
  }
  if (report.config.protocol == ProtocolId::kQudit) {
    out += fmt::format(
        "  chains: {} attempts, {} completed (rate {:.4f})\n",
        s.chain_attempts, s.chains_completed, s.chain_success_rate);
    if (s.tail_sessions > 0) {
      out += fmt::format(
          "  sessions with late phase byproducts: {} ({} below fidelity 0.99, "
          "{} flagged)\n",
          s.tail_sessions, s.tail_low_fidelity_sessions,
          s.discrepancy_sessions);
    }
  }
  for (const auto& anomaly : s.anomalies) {
    out += "  anomaly: " + anomaly + "\n";
  }
  return out;
}

std::string render_costs(const ProtocolConfig& config,
                         const std::vector<int>& dims) {
  AnalyticCosts a = analytic_costs(config, dims);
  if (config.upload_entanglement) a = with_upload_accounting(a);
  const int f = static_cast<int>(dims.size());
  std::string out;
  out += fmt::format("analytic costs: protocol {}", to_string(config.protocol));
  if (config.protocol == ProtocolId::kTeleport) {
    out += fmt::format(" (classical plugin: {})", to_string(config.cpir));
  }
  if (config.protocol == ProtocolId::kQudit) {
    out += fmt::format(" ({} merge mode)", to_string(config.mode));
  }
  out += fmt::format(", F = {}, dims [{}]\n", f, fmt::join(dims, ", "));
  if (config.upload_entanglement) {
    out += "accounting: upload entanglement (each ebit counted as two qubits)\n";
  }
  out += fmt::format("  classical          {:>10.4f} bits up  {:>8.4f} bits down\n",
                     a.bits_up, a.bits_down);
  out += fmt::format("  per pass           {}\n",
                     fmt_quantum(a.qubits_per_pass, a.ebits_per_pass));
  out += fmt::format("  pass probability   {:>10.6f}  (expected passes {:.4f})\n",
                     a.pass_probability, a.expected_passes);
  out += fmt::format("  headline average   {}\n",
                     fmt_quantum(a.expected_qubits, a.expected_ebits));
  if (std::abs(a.session_qubits - a.expected_qubits) > 1e-9 ||
      std::abs(a.session_ebits - a.expected_ebits) > 1e-9) {
    out += fmt::format("  session average    {}\n",
                       fmt_quantum(a.session_qubits, a.session_ebits));
  }
  double baseline = 0.0;
  for (int dim : dims) baseline += std::log2(static_cast<double>(dim));
  out += fmt::format(
      "  trivial baseline   {:>10.4f} qubits  (download every message)\n",
      baseline);
  if (a.bound_qubits >= 0.0) {
    out += fmt::format(
        "  closed-form bound  {:>10.4f} qubits  (4 d^(2d-2) log2 d style: "
        "d pairs charged per attempt)\n",
        a.bound_qubits);
  }
  if (a.literal_reference_qubits >= 0.0) {
    out += fmt::format(
        "  literal reference  {:>10.4f} qubits  (4 d^d log2 d style: "
        "unconditional merge acceptance)\n",
        a.literal_reference_qubits);
  }
  if (config.protocol == ProtocolId::kQudit && !dims.empty() && dims[0] >= 3) {
    if (config.mode == MergeMode::kStrict) {
      out +=
          "  note: strict merges also require a zero phase outcome after the "
          "first merge, so for\n"
          "  d >= 3 the exact expectation above exceeds the literal-reference "
          "figure; the trade-off\n"
          "  buys an exactly correct final phase correction.\n";
    } else {
      out +=
          "  note: paper-literal merges accept every phase outcome, but for "
          "d >= 3 a nonzero late\n"
          "  phase byproduct does not commute through the remaining rotations "
          "and the final\n"
          "  correction leaves a damaged state; see the correctness audit.\n";
    }
  }
  return out;
}

}  // namespace qpir
