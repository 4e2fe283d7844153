#include "solfuzz/vm.hpp"

namespace solfuzz {

std::string outcome_kind_name(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Success: return "success";
        case OutcomeKind::ProgramError: return "program_error";
        case OutcomeKind::Aborted: return "aborted";
        case OutcomeKind::OracleSignal: return "oracle_signal";
    }
    return "?";
}

std::string ExecutionOutcome::describe() const {
    switch (kind) {
        case OutcomeKind::Success:
            return "success(r0=" + std::to_string(code) + ")";
        case OutcomeKind::OracleSignal:
            return "oracle_signal@" + std::to_string(pc);
        case OutcomeKind::ProgramError: {
            const char* r = "";
            switch (error) {
                case ErrorReason::NonZeroExit: r = "nonzero_exit"; break;
                case ErrorReason::DivideByZero: r = "divide_by_zero"; break;
                case ErrorReason::InvalidCpi: r = "invalid_cpi"; break;
                case ErrorReason::CpiFailed: r = "cpi_failed"; break;
                case ErrorReason::WriteViolation: r = "write_violation"; break;
                case ErrorReason::Imbalanced: r = "lamports_imbalance"; break;
                default: r = "error"; break;
            }
            return std::string("program_error(") + r + "," + std::to_string(code) + ")@" + std::to_string(pc);
        }
        case OutcomeKind::Aborted: {
            const char* r = "";
            switch (abort) {
                case AbortReason::MemFault: r = "mem_fault"; break;
                case AbortReason::ComputeExceeded: r = "compute_exceeded"; break;
                case AbortReason::CallDepthExceeded: r = "call_depth_exceeded"; break;
                case AbortReason::CpiDepthExceeded: r = "cpi_depth_exceeded"; break;
                case AbortReason::Reentrancy: r = "reentrancy"; break;
                case AbortReason::ExecutionOverrun: r = "execution_overrun"; break;
                default: r = "abort"; break;
            }
            return std::string("aborted(") + r + ")@" + std::to_string(pc);
        }
    }
    return "?";
}

Vm::Vm(const EbpfProgram& prog, Bytes input, VmEnv* env, ComputeMeter* meter, int cpi_depth)
    : prog_(prog), env_(env), meter_(meter), cpi_depth_(cpi_depth) {
    stack_.base = MM_STACK_START;
    stack_.data.assign(STACK_FRAME_SIZE * STACK_MAX_FRAMES, 0);
    heap_.base = MM_HEAP_START;
    heap_.data.assign(HEAP_SIZE, 0);
    input_.base = MM_INPUT_START;
    input_.data = std::move(input);

    regs_[1] = MM_INPUT_START;
    regs_[2] = input_.data.size();
    regs_[10] = MM_STACK_START + STACK_FRAME_SIZE;  // top of frame 0
}

const uint8_t* Vm::translate(uint64_t addr, uint64_t len) {
    if (stack_.contains(addr, len)) return stack_.data.data() + (addr - stack_.base);
    if (heap_.contains(addr, len)) return heap_.data.data() + (addr - heap_.base);
    if (input_.contains(addr, len)) return input_.data.data() + (addr - input_.base);
    return nullptr;
}

bool Vm::peek(uint64_t addr, uint64_t len, uint8_t* out) const {
    const uint8_t* p = const_cast<Vm*>(this)->translate(addr, len);
    if (!p) return false;
    std::memcpy(out, p, len);
    return true;
}

void Vm::emit_transfer(uint64_t src, uint64_t dst) {
    for (auto* h : hooks_) h->on_control_transfer(*this, src, dst);
}

bool Vm::any_halt() const {
    for (auto* h : hooks_)
        if (h->halt_requested()) return true;
    return false;
}

ExecutionOutcome Vm::execute() { return run_loop(); }

ExecutionOutcome Vm::run_loop() {
    const size_t n = prog_.insn_count();
    while (true) {
        if (pc_ >= n) return ExecutionOutcome::aborted(AbortReason::ExecutionOverrun, pc_);
        if (!meter_->consume(1)) return ExecutionOutcome::aborted(AbortReason::ComputeExceeded, pc_);

        const uint64_t pc = pc_;
        const Insn ins = prog_.insns[pc];
        uint64_t next_pc = pc + 1;
        bool done = false;
        ExecutionOutcome result = ExecutionOutcome::success(0);

        switch (ins.cls()) {
            case CLS_ALU64: {
                const uint8_t op = ins.opcode & 0xf0;
                const uint64_t a = regs_[ins.dst];
                const uint64_t b = ins.is_reg_src() ? regs_[ins.src] : uint64_t(int64_t(ins.imm));
                uint64_t r = 0;
                bool wrapped = false;
                switch (op) {
                    case ALU_ADD:
                        r = a + b;
                        wrapped = (r < a) || ((~(a ^ b) & (a ^ r)) >> 63);
                        break;
                    case ALU_SUB:
                        r = a - b;
                        wrapped = (a < b) || (((a ^ b) & (a ^ r)) >> 63);
                        break;
                    case ALU_MUL: {
                        unsigned __int128 p = (unsigned __int128)a * b;
                        r = uint64_t(p);
                        __int128 sp = (__int128)int64_t(a) * int64_t(b);
                        wrapped = (p >> 64) != 0 || sp != (__int128)int64_t(r);
                        break;
                    }
                    case ALU_DIV:
                        if (b == 0) return ExecutionOutcome::program_error(ErrorReason::DivideByZero, 0, pc);
                        r = a / b;
                        break;
                    case ALU_MOD:
                        if (b == 0) return ExecutionOutcome::program_error(ErrorReason::DivideByZero, 0, pc);
                        r = a % b;
                        break;
                    case ALU_OR: r = a | b; break;
                    case ALU_AND: r = a & b; break;
                    case ALU_XOR: r = a ^ b; break;
                    case ALU_LSH: r = a << (b & 63); break;
                    case ALU_RSH: r = a >> (b & 63); break;
                    case ALU_ARSH: r = uint64_t(int64_t(a) >> (b & 63)); break;
                    case ALU_NEG:
                        r = uint64_t(-int64_t(a));
                        wrapped = a == 0x8000000000000000ull;
                        break;
                    case ALU_MOV: r = b; break;
                }
                regs_[ins.dst] = r;
                for (auto* h : hooks_) h->on_alu(*this, pc, ins, wrapped);
                break;
            }

            case CLS_LD: {  // LDDW
                regs_[ins.dst] = prog_.imm64_at(pc);
                next_pc = pc + 2;
                for (auto* h : hooks_) h->on_lddw(*this, pc, ins.dst);
                break;
            }

            case CLS_LDX: {
                const uint64_t addr = regs_[ins.src] + uint64_t(int64_t(ins.offset));
                const int w = ins.mem_width();
                const uint8_t* p = translate(addr, w);
                if (!p) return ExecutionOutcome::aborted(AbortReason::MemFault, pc, addr);
                uint64_t v = 0;
                std::memcpy(&v, p, w);  // little-endian, zero-extended
                regs_[ins.dst] = v;
                for (auto* h : hooks_) h->on_mem_read(*this, pc, addr, w, ins.dst);
                break;
            }

            case CLS_ST:
            case CLS_STX: {
                const uint64_t addr = regs_[ins.dst] + uint64_t(int64_t(ins.offset));
                const int w = ins.mem_width();
                uint8_t* p = const_cast<uint8_t*>(translate(addr, w));
                if (!p) return ExecutionOutcome::aborted(AbortReason::MemFault, pc, addr);
                const uint64_t v = ins.cls() == CLS_STX ? regs_[ins.src] : uint64_t(int64_t(ins.imm));
                uint8_t old[8], neu[8];
                std::memcpy(old, p, w);
                std::memcpy(p, &v, w);
                std::memcpy(neu, p, w);
                const int src_reg = ins.cls() == CLS_STX ? ins.src : -1;
                for (auto* h : hooks_) h->on_mem_write(*this, pc, addr, w, old, neu, src_reg);
                break;
            }

            case CLS_JMP: {
                const uint8_t op = ins.opcode & 0xf0;
                if (op == JMP_JA) {
                    next_pc = pc + 1 + ins.offset;
                    emit_transfer(pc, next_pc);
                    break;
                }
                if (op == JMP_CALL) {
                    if (ins.src == CALL_SRC_LOCAL) {
                        const uint64_t target = pc + 1 + ins.imm;
                        if (frames_.size() >= STACK_MAX_FRAMES - 1)
                            return ExecutionOutcome::aborted(AbortReason::CallDepthExceeded, pc);
                        for (auto* h : hooks_) h->on_local_call(*this, pc, target, &regs_[1]);
                        Frame f;
                        f.ret_pc = pc + 1;
                        for (int i = 0; i < 4; i++) f.saved_regs[i] = regs_[6 + i];
                        frames_.push_back(f);
                        regs_[10] = MM_STACK_START + STACK_FRAME_SIZE * (frames_.size() + 1);
                        next_pc = target;
                        emit_transfer(pc, target);
                    } else {
                        const uint32_t id = uint32_t(ins.imm);
                        if (!meter_->consume(SYSCALL_COMPUTE_COST))
                            return ExecutionOutcome::aborted(AbortReason::ComputeExceeded, pc);
                        for (auto* h : hooks_) h->on_syscall(*this, pc, id, &regs_[1]);
                        auto term = dispatch_syscall(pc, id);
                        if (term) return *term;
                        emit_transfer(pc, pc + 1);
                    }
                    break;
                }
                if (op == JMP_EXIT) {
                    if (frames_.empty()) {
                        emit_transfer(pc, pc);  // program completion edge
                        done = true;
                        result = regs_[0] == 0
                                     ? ExecutionOutcome::success(0)
                                     : ExecutionOutcome::program_error(ErrorReason::NonZeroExit, regs_[0], pc);
                        break;
                    }
                    Frame f = frames_.back();
                    frames_.pop_back();
                    for (int i = 0; i < 4; i++) regs_[6 + i] = f.saved_regs[i];
                    regs_[10] = MM_STACK_START + STACK_FRAME_SIZE * (frames_.size() + 1);
                    next_pc = f.ret_pc;
                    emit_transfer(pc, next_pc);
                    break;
                }
                // conditional jump
                const uint64_t a = regs_[ins.dst];
                const uint64_t b = ins.is_reg_src() ? regs_[ins.src] : uint64_t(int64_t(ins.imm));
                for (auto* h : hooks_)
                    h->on_reg_compare(*this, pc, ins.dst, ins.is_reg_src() ? int(ins.src) : -1, a, b);
                bool taken = false;
                switch (op) {
                    case JMP_JEQ: taken = a == b; break;
                    case JMP_JNE: taken = a != b; break;
                    case JMP_JGT: taken = a > b; break;
                    case JMP_JGE: taken = a >= b; break;
                    case JMP_JLT: taken = a < b; break;
                    case JMP_JLE: taken = a <= b; break;
                    case JMP_JSGT: taken = int64_t(a) > int64_t(b); break;
                    case JMP_JSGE: taken = int64_t(a) >= int64_t(b); break;
                    case JMP_JSLT: taken = int64_t(a) < int64_t(b); break;
                    case JMP_JSLE: taken = int64_t(a) <= int64_t(b); break;
                }
                next_pc = taken ? pc + 1 + ins.offset : pc + 1;
                emit_transfer(pc, next_pc);
                break;
            }
        }

        retired_++;
        for (auto* h : hooks_) h->on_instruction_retired(*this, pc, ins);
        if (done) return result;
        if (any_halt()) return {OutcomeKind::OracleSignal, 0, AbortReason::None, ErrorReason::None, pc};
        pc_ = next_pc;
    }
}

}  // namespace solfuzz
