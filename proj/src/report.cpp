#include "solfuzz/report.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "solfuzz/txgen.hpp"

namespace solfuzz {

namespace {

nlohmann::json oracle_config_to_json(const OracleConfig& c) {
    nlohmann::json j;
    j["msc"] = c.msc;
    j["moc"] = c.moc;
    j["ib"] = c.ib;
    j["acpi"] = c.acpi;
    j["lamports"] = c.lamports;
    j["mkc"] = c.mkc;
    j["mkc_function_pc"] = c.mkc_function_pc;
    j["mkc_authority"] = to_hex(c.mkc_authority);
    j["malicious_program"] = to_hex(c.malicious_program);
    return j;
}

OracleConfig oracle_config_from_json(const nlohmann::json& j) {
    OracleConfig c;
    c.msc = j.at("msc").get<bool>();
    c.moc = j.at("moc").get<bool>();
    c.ib = j.at("ib").get<bool>();
    c.acpi = j.at("acpi").get<bool>();
    c.lamports = j.at("lamports").get<bool>();
    c.mkc = j.at("mkc").get<bool>();
    c.mkc_function_pc = j.at("mkc_function_pc").get<uint64_t>();
    c.mkc_authority = pubkey_from_bytes(from_hex(j.at("mkc_authority").get<std::string>()));
    c.malicious_program = pubkey_from_bytes(from_hex(j.at("malicious_program").get<std::string>()));
    return c;
}

}  // namespace

std::string report_to_json(const Report& r) {
    nlohmann::json j;
    j["kind"] = report_kind_name(r.kind);
    j["pc"] = r.pc;
    j["detail"] = r.detail;
    j["escalation"] = r.escalation;
    j["exec_index"] = r.exec_index;
    j["tx"] = to_hex(r.tx_wire);
    j["program"] = to_hex(r.program);
    j["snapshot"] = nlohmann::json::parse(r.snapshot_json);
    j["oracles"] = oracle_config_to_json(r.oracles);
    return j.dump(2);
}

Report report_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Report r;
    auto kind = report_kind_from_name(j.at("kind").get<std::string>());
    if (!kind) throw ConfigError("unknown report kind: " + j.at("kind").get<std::string>());
    r.kind = *kind;
    r.pc = j.at("pc").get<uint64_t>();
    r.detail = j.at("detail").get<std::string>();
    r.escalation = j.at("escalation").get<bool>();
    r.exec_index = j.at("exec_index").get<uint64_t>();
    r.tx_wire = from_hex(j.at("tx").get<std::string>());
    r.program = from_hex(j.at("program").get<std::string>());
    r.snapshot_json = j.at("snapshot").dump(2);
    r.oracles = oracle_config_from_json(j.at("oracles"));
    return r;
}

std::string report_filename(const Report& r) {
    return "report_" + std::string(report_kind_name(r.kind)) + "_" + std::to_string(r.pc) +
           ".json";
}

std::string write_report_file(const Report& r, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / report_filename(r);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << report_to_json(r) << "\n";
    return path.string();
}

ExecutionResult replay_report(const Report& r) {
    auto [snap, semantics] = snapshot_from_json(r.snapshot_json);
    LedgerConfig cfg;  // campaigns run on the fixed default geometry
    Ledger ledger(cfg, r.program);
    ledger.restore(std::move(snap), std::move(semantics));
    Oracles oracles(r.oracles);
    TransactionExecutor executor(&ledger, &oracles, nullptr);
    Transaction tx = decode_transaction(r.tx_wire, ledger.snapshot(), cfg);
    return executor.execute(tx);
}

bool replay_matches(const Report& r, const ExecutionResult& result) {
    return result.signal && result.signal->kind == r.kind && result.signal->pc == r.pc;
}

}  // namespace solfuzz
