// Test-program corpus: a manifest of small on-chain programs with known
// flaws, their repaired twins, and the detector kinds each flaw should trip.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solfuzz/assembler.hpp"
#include "solfuzz/ledger.hpp"
#include "solfuzz/oracles.hpp"

namespace solfuzz {

struct CorpusEntry {
    std::string name;
    std::string file;                         // .sasm, relative to the corpus dir
    std::optional<std::string> patched_file;  // repaired twin, if any
    std::vector<ReportKind> expected;         // kinds the flawed variant should trip
    std::string mkc_function;                 // label of the guarded helper, "" if none
    std::string mkc_authority;                // ascii name of the key it must match
};

// Reads <dir>/manifest.json; unknown detector kinds or unreadable files throw.
std::vector<CorpusEntry> load_corpus(const std::string& dir = SOLFUZZ_CORPUS_DIR);

// Assembles <dir>/<file>.
AssembledProgram load_corpus_program(const std::string& file,
                                     const std::string& dir = SOLFUZZ_CORPUS_DIR);

// Detector setup for an entry: everything armed, and the key-check detector
// wired to the entry's helper function and authority key when it names them.
OracleConfig corpus_oracles(const CorpusEntry& e, const AssembledProgram& prog,
                            const LedgerConfig& lcfg);

}  // namespace solfuzz
