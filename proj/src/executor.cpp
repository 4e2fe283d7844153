#include "solfuzz/executor.hpp"

#include <algorithm>

namespace solfuzz {

TransactionExecutor::TransactionExecutor(const Ledger* ledger, Oracles* oracles,
                                         CoverageMap* coverage, ExecutorConfig cfg)
    : ledger_(ledger),
      oracles_(oracles),
      coverage_(coverage),
      cfg_(std::move(cfg)),
      target_program_(load_program(ledger->program_bytes(), ProgramFormat::Flat, cfg_.syscalls)) {}

Pubkey TransactionExecutor::current_program_id() const {
    return stack_.empty() ? Pubkey{} : stack_.back()->program_id;
}

std::array<uint64_t, 4> TransactionExecutor::clock_info() {
    const Account* clock = working_.find(ledger_->config().sysvar_clock);
    std::array<uint64_t, 4> info{1, 1, 1700000000, 1};
    if (clock && clock->data.size() >= 32)
        for (int i = 0; i < 4; i++) info[i] = read_le64(clock->data.data() + i * 8);
    return info;
}

void TransactionExecutor::log(const std::string& msg) {
    if (cfg_.log_sink) cfg_.log_sink(msg);
}

void TransactionExecutor::refresh_from_working(Frame& frame, Bytes& input) const {
    for (const AccountRange& r : frame.layout.accounts) {
        if (r.dup) continue;
        const Account* a = working_.find(r.pubkey);
        if (!a) continue;
        write_le64(input.data() + r.lamports, a->lamports);
        std::copy_n(a->data.data(), std::min<size_t>(a->data.size(), r.data_size),
                    input.begin() + r.data);
    }
}

ExecutionOutcome TransactionExecutor::invoke(const Instruction& instr, int depth,
                                             bool top_level) {
    auto [blob, layout] = serialize(instr, working_);
    Frame frame;
    frame.layout = std::move(layout);
    frame.baseline = blob;
    frame.program_id = instr.program_id;

    // Callee code comes from the target cache or the program account's data.
    EbpfProgram callee;
    const EbpfProgram* prog = &target_program_;
    if (instr.program_id != ledger_->config().target_program) {
        const Account* pa = working_.find(instr.program_id);
        if (!pa) return ExecutionOutcome::program_error(ErrorReason::InvalidCpi, 0, 0);
        try {
            callee = load_program(pa->data, ProgramFormat::Flat, cfg_.syscalls);
        } catch (const LoadError&) {
            return ExecutionOutcome::program_error(ErrorReason::InvalidCpi, 0, 0);
        }
        prog = &callee;
    }

    VmInstrumentation inst(&frame.layout, oracles_, oracle_accounts_for(instr, working_),
                           instr.program_id, top_level, &working_, top_level ? coverage_ : nullptr);
    Vm vm(*prog, std::move(blob), this, &meter_, depth);
    inst.attach(vm);
    frame.vm = &vm;

    stack_.push_back(&frame);
    ExecutionOutcome outcome = vm.execute();
    stack_.pop_back();

    if (top_level) result_->retired = vm.retired();
    auto structures = inst.extractor.seed_structures();
    result_->structures.insert(result_->structures.end(), structures.begin(), structures.end());
    auto layouts = inst.extractor.data_layouts();
    result_->layouts.insert(result_->layouts.end(), layouts.begin(), layouts.end());

    if (outcome.kind == OutcomeKind::Success) {
        auto violation = writeback(frame.baseline, vm.input_region(), frame.layout, working_);
        if (violation) return ExecutionOutcome::program_error(*violation, 0, 0);
    }
    return outcome;
}

ExecutionOutcome TransactionExecutor::cpi_invoke(const CpiRequest& req, Vm& caller) {
    auto invalid = [] { return ExecutionOutcome::program_error(ErrorReason::InvalidCpi, 0, 0); };

    for (const Frame* f : stack_)
        if (f->program_id == req.target)
            return ExecutionOutcome::aborted(AbortReason::Reentrancy, 0);

    const Account* target = working_.find(req.target);
    if (!target || !target->executable) return invalid();
    for (const CpiAccountMeta& m : req.metas)
        if (!working_.find(m.pubkey)) return invalid();

    // Make the caller's writes so far visible to the callee.
    Frame& frame = *stack_.back();
    auto violation = writeback(frame.baseline, caller.input_region(), frame.layout, working_);
    if (violation) return ExecutionOutcome::program_error(*violation, 0, 0);
    frame.baseline = caller.input_region();

    ExecutionOutcome nested = ExecutionOutcome::success(0);
    if (!target->data.empty()) {  // data-less executables (system, loader) are no-ops
        Instruction instr;
        instr.program_id = req.target;
        for (const CpiAccountMeta& m : req.metas)
            instr.account_metas.push_back({m.pubkey, m.is_signer, m.is_writable});
        instr.data = req.data;
        nested = invoke(instr, caller.cpi_depth() + 1, false);
    }

    if (nested.kind == OutcomeKind::Success) {
        refresh_from_working(frame, caller.mutable_input_region());
        frame.baseline = caller.input_region();
    }
    return nested;
}

ExecutionResult TransactionExecutor::execute(const Transaction& tx) {
    ExecutionResult result;
    result_ = &result;
    working_ = ledger_->working_copy();
    meter_ = ComputeMeter{cfg_.compute_budget};
    stack_.clear();

    oracles_->begin_execution(tx.signer_set(), working_.roles);
    if (coverage_) coverage_->begin_execution();

    result.outcome = invoke(tx.to_instruction(ledger_->config().target_program), 0, true);

    if (result.outcome.kind == OutcomeKind::OracleSignal) {
        result.signal = *oracles_->signal();
        result.outcome.pc = result.signal->pc;
    } else if (result.outcome.kind == OutcomeKind::Success) {
        result.signal = oracles_->check_lamports(ledger_->snapshot(), working_);
        result.working = std::move(working_);
    }
    result_ = nullptr;
    return result;
}

}  // namespace solfuzz
