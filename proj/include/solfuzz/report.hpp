// Self-contained finding files: everything needed to re-execute the exact
// transaction against the exact ledger state that produced the signal, so a
// replay reproduces the same kind at the same pc.
#pragma once

#include <string>

#include "solfuzz/executor.hpp"

namespace solfuzz {

struct Report {
    ReportKind kind = ReportKind::MissingSignerCheck;
    uint64_t pc = 0;
    std::string detail;
    bool escalation = false;
    uint64_t exec_index = 0;    // which execution of the campaign found it
    Bytes tx_wire;              // canonical transaction bytes
    Bytes program;              // flat program image
    std::string snapshot_json;  // ledger state + semantics at execution start
    OracleConfig oracles;       // detector arming used by the campaign
};

std::string report_to_json(const Report& r);
Report report_from_json(const std::string& text);

// "report_<kind>_<pc>.json" — one file per deduplicated finding
std::string report_filename(const Report& r);

// Writes the report under `dir` (created if missing); returns the full path.
std::string write_report_file(const Report& r, const std::string& dir);

// Rebuilds ledger and oracles from the report and runs its transaction once.
ExecutionResult replay_report(const Report& r);

// A replay matches when it signals the report's kind at the report's pc.
bool replay_matches(const Report& r, const ExecutionResult& result);

}  // namespace solfuzz
