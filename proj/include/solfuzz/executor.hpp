// Transaction execution: serialize the instruction against a working copy of
// the ledger, run the instrumented VM, write results back, and host nested
// cross-program invokes (sync caller memory down, refresh it after). One
// executor serves one campaign; each execute() call is isolated.
#pragma once

#include <functional>

#include "solfuzz/pipeline.hpp"
#include "solfuzz/txgen.hpp"

namespace solfuzz {

struct ExecutionResult {
    ExecutionOutcome outcome;
    std::optional<OracleSignalInfo> signal;  // oracle halt, or lamports flow on success
    std::vector<SeedStructure> structures;   // semantics observed this execution
    std::vector<AccountDataLayout> layouts;
    LedgerSnapshot working;  // post-writeback state; meaningful on success
    uint64_t retired = 0;    // top-level VM instructions
};

struct ExecutorConfig {
    uint64_t compute_budget = DEFAULT_COMPUTE_BUDGET;
    SyscallTable syscalls = SyscallTable::defaults();
    std::function<void(const std::string&)> log_sink;  // sol_log output when set
};

class TransactionExecutor : public VmEnv {
  public:
    // `ledger` and `oracles` must outlive the executor; `coverage` may be null.
    TransactionExecutor(const Ledger* ledger, Oracles* oracles, CoverageMap* coverage,
                        ExecutorConfig cfg = {});

    ExecutionResult execute(const Transaction& tx);

    // VmEnv (used by the VMs this executor runs)
    ExecutionOutcome cpi_invoke(const CpiRequest& req, Vm& caller) override;
    Pubkey current_program_id() const override;
    std::array<uint64_t, 4> clock_info() override;
    void log(const std::string& msg) override;

  private:
    struct Frame {
        InputLayoutMap layout;
        Bytes baseline;  // blob as last synchronized with the working snapshot
        Vm* vm = nullptr;
        Pubkey program_id{};
    };

    ExecutionOutcome invoke(const Instruction& instr, int depth, bool top_level);
    void refresh_from_working(Frame& frame, Bytes& input) const;

    const Ledger* ledger_;
    Oracles* oracles_;
    CoverageMap* coverage_;
    ExecutorConfig cfg_;
    EbpfProgram target_program_;

    // per-execute() state
    LedgerSnapshot working_;
    ComputeMeter meter_;
    std::vector<Frame*> stack_;
    ExecutionResult* result_ = nullptr;
};

}  // namespace solfuzz
