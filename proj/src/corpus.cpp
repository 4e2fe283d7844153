#include "solfuzz/corpus.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "solfuzz/assembler.hpp"

namespace solfuzz {

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::vector<CorpusEntry> load_corpus(const std::string& dir) {
    nlohmann::json m = nlohmann::json::parse(read_text(dir + "/manifest.json"));
    std::vector<CorpusEntry> out;
    for (const auto& p : m.at("programs")) {
        CorpusEntry e;
        e.name = p.at("name").get<std::string>();
        e.file = p.at("file").get<std::string>();
        if (p.contains("patched") && !p.at("patched").is_null())
            e.patched_file = p.at("patched").get<std::string>();
        for (const auto& k : p.at("expected")) {
            auto kind = report_kind_from_name(k.get<std::string>());
            if (!kind) throw ConfigError("manifest: unknown kind '" + k.get<std::string>() + "'");
            e.expected.push_back(*kind);
        }
        e.mkc_function = p.value("mkc_function", "");
        e.mkc_authority = p.value("mkc_authority", "");
        out.push_back(std::move(e));
    }
    return out;
}

AssembledProgram load_corpus_program(const std::string& file, const std::string& dir) {
    return assemble(read_text(dir + "/" + file));
}

OracleConfig corpus_oracles(const CorpusEntry& e, const AssembledProgram& prog,
                            const LedgerConfig& lcfg) {
    OracleConfig cfg = OracleConfig::from_csv("all");
    cfg.malicious_program = lcfg.malicious_program;
    if (!e.mkc_function.empty()) {
        auto it = prog.labels.find(e.mkc_function);
        if (it == prog.labels.end())
            throw ConfigError(e.name + ": no label '" + e.mkc_function + "'");
        cfg.mkc_function_pc = it->second;
        cfg.mkc_authority = ascii_key(e.mkc_authority);
    }
    return cfg;
}

}  // namespace solfuzz
