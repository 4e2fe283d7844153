#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "solfuzz/assembler.hpp"
#include "solfuzz/isa.hpp"

namespace solfuzz {
namespace {

const char* alu_name(uint8_t op) {
    switch (op) {
        case ALU_ADD: return "add64";
        case ALU_SUB: return "sub64";
        case ALU_MUL: return "mul64";
        case ALU_DIV: return "div64";
        case ALU_OR: return "or64";
        case ALU_AND: return "and64";
        case ALU_LSH: return "lsh64";
        case ALU_RSH: return "rsh64";
        case ALU_MOD: return "mod64";
        case ALU_XOR: return "xor64";
        case ALU_MOV: return "mov64";
        case ALU_ARSH: return "arsh64";
        default: return nullptr;
    }
}

const char* jmp_name(uint8_t op) {
    switch (op) {
        case JMP_JEQ: return "jeq";
        case JMP_JGT: return "jgt";
        case JMP_JGE: return "jge";
        case JMP_JLT: return "jlt";
        case JMP_JLE: return "jle";
        case JMP_JNE: return "jne";
        case JMP_JSGT: return "jsgt";
        case JMP_JSGE: return "jsge";
        case JMP_JSLT: return "jslt";
        case JMP_JSLE: return "jsle";
        default: return nullptr;
    }
}

const char* size_suffix(uint8_t sz) {
    switch (sz) {
        case SZ_B: return "b";
        case SZ_H: return "h";
        case SZ_W: return "w";
        case SZ_DW: return "dw";
        default: return "?";
    }
}

std::string mem_operand(uint8_t reg, int16_t off) {
    std::string s = "[r" + std::to_string(reg);
    if (off > 0) s += "+" + std::to_string(off);
    if (off < 0) s += std::to_string(off);
    return s + "]";
}

std::string hex_u64(uint64_t v) {
    char buf[19];
    snprintf(buf, sizeof buf, "0x%llx", (unsigned long long)v);
    return buf;
}

// target_name: formats a resolved jump/call destination; when null, emits the
// raw relative offset (+N / -N) for single-line display.
std::string render(const EbpfProgram& prog, uint64_t pc,
                   const std::function<std::string(uint64_t, bool)>* target_name) {
    const Insn& ins = prog.insns[pc];
    auto target = [&](int64_t rel, bool is_fn) {
        uint64_t dst = uint64_t(int64_t(pc) + 1 + rel);
        if (target_name) return (*target_name)(dst, is_fn);
        return std::string(rel >= 0 ? "+" : "") + std::to_string(rel);
    };
    std::ostringstream o;
    switch (ins.cls()) {
        case CLS_ALU64: {
            uint8_t op = ins.opcode & 0xf0;
            if (op == ALU_NEG) {
                o << "neg64 r" << int(ins.dst);
            } else if (ins.is_reg_src()) {
                o << alu_name(op) << " r" << int(ins.dst) << ", r" << int(ins.src);
            } else {
                o << alu_name(op) << " r" << int(ins.dst) << ", " << ins.imm;
            }
            break;
        }
        case CLS_LD:
            o << "lddw r" << int(ins.dst) << ", " << hex_u64(prog.imm64_at(pc));
            break;
        case CLS_LDX:
            o << "ldx" << size_suffix(ins.size_field()) << " r" << int(ins.dst) << ", "
              << mem_operand(ins.src, ins.offset);
            break;
        case CLS_ST:
            o << "st" << size_suffix(ins.size_field()) << " " << mem_operand(ins.dst, ins.offset)
              << ", " << ins.imm;
            break;
        case CLS_STX:
            o << "stx" << size_suffix(ins.size_field()) << " "
              << mem_operand(ins.dst, ins.offset) << ", r" << int(ins.src);
            break;
        case CLS_JMP: {
            uint8_t op = ins.opcode & 0xf0;
            if (ins.opcode == OP_JA) {
                o << "ja " << target(ins.offset, false);
            } else if (ins.opcode == OP_EXIT) {
                o << "exit";
            } else if (ins.opcode == OP_CALL) {
                if (ins.src == CALL_SRC_LOCAL) {
                    o << "call " << target(ins.imm, true);
                } else {
                    o << "call " << prog.syscalls.name(uint32_t(ins.imm));
                }
            } else if (const char* nm = jmp_name(op)) {
                o << nm << " r" << int(ins.dst) << ", ";
                if (ins.is_reg_src())
                    o << "r" << int(ins.src);
                else
                    o << ins.imm;
                o << ", " << target(ins.offset, false);
            }
            break;
        }
    }
    return o.str();
}

}  // namespace

std::string disassemble_insn(const EbpfProgram& prog, uint64_t pc) {
    return render(prog, pc, nullptr);
}

std::string disassemble(const EbpfProgram& prog) {
    // collect label pcs
    std::set<uint64_t> jump_labels;
    for (uint64_t pc = 0; pc < prog.insn_count(); pc++) {
        if (!prog.insn_start[pc]) continue;
        const Insn& ins = prog.insns[pc];
        if (ins.cls() != CLS_JMP) continue;
        if (ins.opcode == OP_JA || is_cond_jump(ins.opcode))
            jump_labels.insert(uint64_t(int64_t(pc) + 1 + ins.offset));
    }
    std::function<std::string(uint64_t, bool)> name = [&](uint64_t dst, bool is_fn) {
        return (is_fn ? "fn_" : "L") + std::to_string(dst);
    };

    std::ostringstream o;
    const auto defaults = SyscallTable::defaults();
    for (const auto& [id, nm] : prog.syscalls.by_id)
        if (!defaults.has_id(id)) o << ".syscall " << nm << " " << id << "\n";
    for (uint64_t pc = 0; pc < prog.insn_count(); pc++) {
        if (!prog.insn_start[pc]) continue;
        if (prog.local_functions.count(pc)) o << "fn_" << pc << ":\n";
        if (jump_labels.count(pc)) o << "L" << pc << ":\n";
        o << "    " << render(prog, pc, &name) << "\n";
    }
    return o.str();
}

}  // namespace solfuzz
