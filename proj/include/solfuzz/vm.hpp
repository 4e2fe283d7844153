// Instrumented eBPF interpreter. Every instruction, memory access, register
// comparison, syscall and cross-program invoke is surfaced through VmHooks so
// coverage, taint tracking, oracles and extractors can observe execution.
#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "solfuzz/program.hpp"

namespace solfuzz {

// guest address space
constexpr uint64_t MM_STACK_START = 0x200000000ull;
constexpr uint64_t MM_HEAP_START = 0x300000000ull;
constexpr uint64_t MM_INPUT_START = 0x400000000ull;
constexpr uint64_t STACK_FRAME_SIZE = 4096;
constexpr uint64_t STACK_MAX_FRAMES = 64;
constexpr uint64_t HEAP_SIZE = 32 * 1024;

constexpr uint64_t DEFAULT_COMPUTE_BUDGET = 200000;
constexpr uint64_t SYSCALL_COMPUTE_COST = 100;
constexpr int MAX_CPI_DEPTH = 4;

enum class OutcomeKind { Success, ProgramError, Aborted, OracleSignal };

enum class AbortReason {
    None,
    MemFault,
    ComputeExceeded,
    CallDepthExceeded,
    CpiDepthExceeded,
    Reentrancy,
    ExecutionOverrun,
};

enum class ErrorReason {
    None,
    NonZeroExit,
    DivideByZero,
    InvalidCpi,
    CpiFailed,
    WriteViolation,   // writeback: read-only or immutable field modified
    Imbalanced,       // writeback: lamports sum not conserved
};

struct ExecutionOutcome {
    OutcomeKind kind = OutcomeKind::Success;
    uint64_t code = 0;  // r0 for NonZeroExit, aux detail otherwise
    AbortReason abort = AbortReason::None;
    ErrorReason error = ErrorReason::None;
    uint64_t pc = 0;

    bool ok() const { return kind == OutcomeKind::Success; }
    std::string describe() const;

    static ExecutionOutcome success(uint64_t r0) { return {OutcomeKind::Success, r0, AbortReason::None, ErrorReason::None, 0}; }
    static ExecutionOutcome program_error(ErrorReason r, uint64_t code, uint64_t pc) {
        return {OutcomeKind::ProgramError, code, AbortReason::None, r, pc};
    }
    static ExecutionOutcome aborted(AbortReason r, uint64_t pc, uint64_t aux = 0) {
        return {OutcomeKind::Aborted, aux, r, ErrorReason::None, pc};
    }
};

// One CPI account meta as parsed from guest memory.
struct CpiAccountMeta {
    Pubkey pubkey{};
    bool is_signer = false;
    bool is_writable = false;
};

struct CpiRequest {
    Pubkey target{};
    std::vector<CpiAccountMeta> metas;
    Bytes data;
    std::vector<Pubkey> signer_pdas;  // PDAs derived from invoke_signed seeds
};

class Vm;

// Host services the interpreter needs but does not own: nested invokes and
// sysvar data. The transaction executor provides the real implementation.
struct VmEnv {
    virtual ~VmEnv() = default;
    // Runs the callee transaction-side; the depth limit is already checked by
    // the VM. Returns the nested outcome (propagated verbatim on failure).
    virtual ExecutionOutcome cpi_invoke(const CpiRequest& req, Vm& caller) = 0;
    // Program id of the code running in this VM; signer PDAs derive from it.
    virtual Pubkey current_program_id() const { return {}; }
    virtual std::array<uint64_t, 4> clock_info() { return {1, 1, 1700000000, 1}; }
    // Copies instruction record `index` of the instructions sysvar into out.
    virtual bool load_instruction_record(uint64_t index, Bytes& out) {
        (void)index, (void)out;
        return false;
    }
    virtual void log(const std::string& msg) { (void)msg; }
};

// Environment for standalone program runs (tests, cfg tool): CPI is an error.
struct NoCpiEnv : VmEnv {
    ExecutionOutcome cpi_invoke(const CpiRequest&, Vm&) override {
        return ExecutionOutcome::program_error(ErrorReason::CpiFailed, 0, 0);
    }
};

struct VmHooks {
    virtual ~VmHooks() = default;
    virtual void on_instruction_retired(const Vm& vm, uint64_t pc, const Insn& insn) { (void)vm, (void)pc, (void)insn; }
    virtual void on_control_transfer(const Vm& vm, uint64_t src_pc, uint64_t dst_pc) { (void)vm, (void)src_pc, (void)dst_pc; }
    // rhs_reg < 0 means immediate comparison
    virtual void on_reg_compare(const Vm& vm, uint64_t pc, int lhs_reg, int rhs_reg, uint64_t lhs_val, uint64_t rhs_val) {
        (void)vm, (void)pc, (void)lhs_reg, (void)rhs_reg, (void)lhs_val, (void)rhs_val;
    }
    // wrapped = carry/borrow/overflow for this opcode; fires for every ALU64 op
    virtual void on_alu(const Vm& vm, uint64_t pc, const Insn& insn, bool wrapped) { (void)vm, (void)pc, (void)insn, (void)wrapped; }
    virtual void on_lddw(const Vm& vm, uint64_t pc, uint8_t dst) { (void)vm, (void)pc, (void)dst; }
    virtual void on_mem_read(const Vm& vm, uint64_t pc, uint64_t addr, int width, int dst_reg) {
        (void)vm, (void)pc, (void)addr, (void)width, (void)dst_reg;
    }
    // src_reg < 0 means store-immediate
    virtual void on_mem_write(const Vm& vm, uint64_t pc, uint64_t addr, int width, const uint8_t* old_bytes,
                              const uint8_t* new_bytes, int src_reg) {
        (void)vm, (void)pc, (void)addr, (void)width, (void)old_bytes, (void)new_bytes, (void)src_reg;
    }
    virtual void on_syscall(const Vm& vm, uint64_t pc, uint32_t id, const uint64_t* args) { (void)vm, (void)pc, (void)id, (void)args; }
    virtual void on_local_call(const Vm& vm, uint64_t pc, uint64_t target_pc, const uint64_t* args) {
        (void)vm, (void)pc, (void)target_pc, (void)args;
    }
    virtual void on_cpi(const Vm& vm, uint64_t pc, const CpiRequest& req) { (void)vm, (void)pc, (void)req; }
    // Fired after a PDA syscall wrote a derived key to guest memory.
    virtual void on_pda_result(const Vm& vm, uint64_t pc, uint64_t result_addr,
                               const std::vector<std::pair<uint64_t, uint64_t>>& seed_slices) {
        (void)vm, (void)pc, (void)result_addr, (void)seed_slices;
    }
    // Polled after each retired instruction; true stops the VM (oracle signal).
    virtual bool halt_requested() const { return false; }
};

struct ComputeMeter {
    uint64_t remaining = DEFAULT_COMPUTE_BUDGET;
    bool consume(uint64_t units) {
        if (remaining < units) {
            remaining = 0;
            return false;
        }
        remaining -= units;
        return true;
    }
};

struct MemRegion {
    uint64_t base = 0;
    Bytes data;
    bool contains(uint64_t addr, uint64_t len) const {
        return addr >= base && len <= data.size() && addr - base <= data.size() - len;
    }
};

class Vm {
  public:
    Vm(const EbpfProgram& prog, Bytes input, VmEnv* env, ComputeMeter* meter, int cpi_depth = 0);

    void add_hooks(VmHooks* h) { hooks_.push_back(h); }

    ExecutionOutcome execute();

    // state access (hooks, oracles, tests)
    uint64_t reg(int i) const { return regs_[i]; }
    uint64_t retired() const { return retired_; }
    int cpi_depth() const { return cpi_depth_; }
    const EbpfProgram& program() const { return prog_; }
    const Bytes& input_region() const { return input_.data; }
    Bytes& mutable_input_region() { return input_.data; }

    // Bounds-checked guest memory read; false on fault (no abort).
    bool peek(uint64_t addr, uint64_t len, uint8_t* out) const;
    bool peek_u64(uint64_t addr, uint64_t* out) const {
        uint8_t b[8];
        if (!peek(addr, 8, b)) return false;
        *out = read_le64(b);
        return true;
    }

  private:
    struct Frame {
        uint64_t ret_pc;
        uint64_t saved_regs[4];  // r6..r9
    };

    const uint8_t* translate(uint64_t addr, uint64_t len);
    ExecutionOutcome run_loop();
    std::optional<ExecutionOutcome> dispatch_syscall(uint64_t pc, uint32_t id);
    std::optional<ExecutionOutcome> syscall_pda(uint64_t pc, uint32_t id);
    std::optional<ExecutionOutcome> syscall_invoke(uint64_t pc);

    // hook fan-out helpers
    void emit_transfer(uint64_t src, uint64_t dst);
    bool any_halt() const;

    const EbpfProgram& prog_;
    VmEnv* env_;
    ComputeMeter* meter_;
    int cpi_depth_;
    std::vector<VmHooks*> hooks_;

    uint64_t regs_[11] = {};
    uint64_t pc_ = 0;
    uint64_t retired_ = 0;
    std::vector<Frame> frames_;

    MemRegion stack_, heap_, input_;

    friend struct SyscallCtx;
};

std::string outcome_kind_name(OutcomeKind k);

}  // namespace solfuzz
