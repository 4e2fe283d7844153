// The fuzzing loop: mutate corpus entries into transactions, execute them,
// admit children that light up new coverage edges, commit successful state
// changes, grow the ledger when new program semantics surface, and turn
// oracle signals into deduplicated reports.
//
// With max_execs as the binding budget the whole run is a pure function of
// the seed: two campaigns over the same program produce byte-identical
// report sets and identical coverage.
#pragma once

#include <chrono>
#include <random>
#include <set>

#include "solfuzz/coverage.hpp"
#include "solfuzz/executor.hpp"
#include "solfuzz/mutate.hpp"
#include "solfuzz/report.hpp"
#include "solfuzz/txgen.hpp"

namespace solfuzz {

struct CampaignConfig {
    uint64_t seed = 1;
    uint64_t max_execs = 0;         // 0: no execution cap
    double time_budget_secs = 0.0;  // 0: no deadline
    size_t coverage_size = 65536;
    OracleConfig oracles;
    ExecutorConfig executor;
    std::set<ReportKind> halt_kinds;            // stop on the first report of any listed kind
    std::function<void(const Report&)> on_report;  // streamed as findings appear
};

struct CampaignStats {
    uint64_t executions = 0;
    uint64_t successes = 0;
    uint64_t program_errors = 0;
    uint64_t aborts = 0;
    uint64_t signals = 0;  // oracle hits including duplicates
    uint64_t corpus_size = 0;
    uint64_t edges_seen = 0;
    uint64_t semantics_growths = 0;
};

class Campaign {
  public:
    Campaign(Ledger ledger, CampaignConfig cfg);
    Campaign(const Campaign&) = delete;
    Campaign& operator=(const Campaign&) = delete;

    void run();   // steps until a budget is exhausted or a halt kind is found
    bool step();  // one parent burst; false once the campaign is done

    const std::vector<Report>& reports() const { return reports_; }
    const CampaignStats& stats() const { return stats_; }
    const CoverageMap& coverage() const { return coverage_; }
    const Ledger& ledger() const { return ledger_; }

  private:
    struct Entry {
        Bytes wire;
        uint64_t novelty = 0;  // fresh edges when admitted; sets the burst size
    };

    void seed_corpus();
    void execute_child(const Bytes& wire);
    bool exhausted() const;

    Ledger ledger_;
    CampaignConfig cfg_;
    Oracles oracles_;
    CoverageMap coverage_;
    TransactionExecutor executor_;
    std::mt19937_64 rng_;
    std::vector<Entry> corpus_;
    std::set<Bytes> admitted_;  // canonical wires already in the corpus
    std::vector<Report> reports_;
    std::set<std::pair<ReportKind, uint64_t>> reported_;  // (kind, pc) dedup
    CampaignStats stats_;
    bool halted_ = false;
    size_t cursor_ = 0;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace solfuzz
