// Per-VM instrumentation: the semantics extractor that recovers PDA seed
// structures and pubkey positions in account data from observed execution,
// and the bundle that wires taint, oracles, extraction and coverage onto one
// VM in the right order.
#pragma once

#include <set>

#include "solfuzz/coverage.hpp"
#include "solfuzz/ledger.hpp"
#include "solfuzz/oracles.hpp"

namespace solfuzz {

class SemanticsExtractor : public VmHooks {
  public:
    SemanticsExtractor(const InputLayoutMap* layout, TaintEngine* taint,
                       const LedgerSnapshot* snap, Pubkey program_id)
        : layout_(layout), taint_(taint), snap_(snap), program_id_(program_id) {}

    void on_syscall(const Vm&, uint64_t, uint32_t id, const uint64_t*) override {
        pending_syscall_ = id;
    }
    void on_pda_result(const Vm& vm, uint64_t pc, uint64_t result_addr,
                       const std::vector<std::pair<uint64_t, uint64_t>>& seed_slices) override;
    void on_mem_write(const Vm& vm, uint64_t pc, uint64_t addr, int width,
                      const uint8_t* old_bytes, const uint8_t* new_bytes, int src_reg) override;

    const std::vector<SeedStructure>& seed_structures() const { return structures_; }
    // Assembled from the accumulated pubkey-valued stores; call after the run.
    std::vector<AccountDataLayout> data_layouts() const;

  private:
    const InputLayoutMap* layout_;
    TaintEngine* taint_;
    const LedgerSnapshot* snap_;
    Pubkey program_id_;
    uint32_t pending_syscall_ = 0;
    std::vector<SeedStructure> structures_;
    struct AccountWrites {
        uint64_t data_len = 0;
        std::set<uint32_t> pubkey_starts;
        std::set<uint64_t> pcs;
    };
    std::map<int, AccountWrites> writes_;
};

// Everything observing one VM. Attach order matters: taint first so labels
// are current when the oracle adapter and extractor read them.
struct VmInstrumentation {
    TaintEngine taint;
    OracleVmAdapter oracle_adapter;
    SemanticsExtractor extractor;
    std::optional<CoverageHook> coverage;

    VmInstrumentation(const InputLayoutMap* layout, Oracles* oracles,
                      std::vector<OracleAccount> accounts, Pubkey program_id, bool top_level,
                      const LedgerSnapshot* snap, CoverageMap* coverage_map)
        : taint(layout),
          oracle_adapter(oracles, &taint, layout, std::move(accounts), program_id, top_level),
          extractor(layout, &taint, snap, program_id) {
        taint.compare_sink = [this](const TaintCompare& c) { oracle_adapter.compare(c); };
        if (top_level && coverage_map) coverage.emplace(coverage_map);
    }

    void attach(Vm& vm) {
        vm.add_hooks(&taint);
        vm.add_hooks(&oracle_adapter);
        vm.add_hooks(&extractor);
        if (coverage) vm.add_hooks(&*coverage);
    }
};

std::vector<OracleAccount> oracle_accounts_for(const Instruction& instr,
                                               const LedgerSnapshot& snap);

}  // namespace solfuzz
