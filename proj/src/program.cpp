#include "solfuzz/program.hpp"

#include <sstream>

#include "solfuzz/sha256.hpp"

namespace solfuzz {

SyscallTable SyscallTable::defaults() {
    SyscallTable t;
    t.add(SC_LOG, "sol_log");
    t.add(SC_INVOKE_SIGNED_RUST, "sol_invoke_signed_rust");
    t.add(SC_INVOKE_SIGNED_C, "sol_invoke_signed_c");
    t.add(SC_CREATE_PROGRAM_ADDRESS, "sol_create_program_address");
    t.add(SC_TRY_FIND_PROGRAM_ADDRESS, "sol_try_find_program_address");
    t.add(SC_GET_CLOCK_SYSVAR, "sol_get_clock_sysvar");
    t.add(SC_LOAD_INSTRUCTION_AT, "sol_load_instruction_at");
    return t;
}

SyscallTable SyscallTable::parse(const std::string& text) {
    SyscallTable t = defaults();
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        uint64_t id;
        std::string name;
        if (!(ls >> id)) continue;  // blank
        if (!(ls >> name) || id > 0xffffffffull)
            throw ConfigError("syscall table line " + std::to_string(lineno) + ": expected '<u32> <name>'");
        t.add(uint32_t(id), name);
    }
    return t;
}

static void fail(uint64_t pc, const std::string& msg) {
    throw LoadError("pc " + std::to_string(pc) + ": " + msg);
}

EbpfProgram load_program(const Bytes& blob, ProgramFormat format, const SyscallTable& table) {
    Bytes text = format == ProgramFormat::Elf ? elf_extract_text(blob) : blob;
    if (text.empty()) throw LoadError("empty program");
    if (text.size() % 8) throw LoadError("text length not a multiple of 8");
    size_t n = text.size() / 8;
    if (n > (1u << 20)) throw LoadError("program too large");

    EbpfProgram prog;
    prog.text = text;
    prog.syscalls = table;
    prog.hash = sha256(text);
    prog.insns.reserve(n);
    for (size_t i = 0; i < n; i++) prog.insns.push_back(decode_insn(text.data() + i * 8));
    prog.insn_start.assign(n, true);

    // first pass: LDDW pairing
    for (size_t pc = 0; pc < n; pc++) {
        if (!prog.insn_start[pc]) continue;
        if (prog.insns[pc].opcode == OP_LDDW) {
            if (pc + 1 >= n) fail(pc, "lddw missing second slot");
            const Insn& lo = prog.insns[pc + 1];
            if (lo.opcode != 0 || lo.dst || lo.src || lo.offset) fail(pc, "malformed lddw continuation");
            prog.insn_start[pc + 1] = false;
        }
    }

    auto check_jump_target = [&](uint64_t pc, int64_t target) {
        if (target < 0 || uint64_t(target) >= n) fail(pc, "jump target out of range");
        if (!prog.insn_start[size_t(target)]) fail(pc, "jump into lddw continuation");
    };

    for (size_t pc = 0; pc < n; pc++) {
        if (!prog.insn_start[pc]) continue;
        const Insn& ins = prog.insns[pc];
        switch (ins.cls()) {
            case CLS_ALU64: {
                uint8_t op = ins.opcode & 0xf0;
                bool known = op == ALU_ADD || op == ALU_SUB || op == ALU_MUL || op == ALU_DIV ||
                             op == ALU_OR || op == ALU_AND || op == ALU_LSH || op == ALU_RSH ||
                             op == ALU_NEG || op == ALU_MOD || op == ALU_XOR || op == ALU_MOV ||
                             op == ALU_ARSH;
                if (!known) fail(pc, "unknown alu opcode");
                if (op == ALU_NEG && ins.is_reg_src()) fail(pc, "neg takes no source register");
                if (ins.dst > 9) fail(pc, "alu destination must be r0..r9");
                if (ins.is_reg_src() && ins.src > 10) fail(pc, "bad source register");
                break;
            }
            case CLS_LD:
                if (ins.opcode != OP_LDDW) fail(pc, "unknown load opcode");
                if (ins.dst > 9) fail(pc, "lddw destination must be r0..r9");
                break;
            case CLS_LDX:
                if ((ins.opcode & 0xe0) != 0x60) fail(pc, "unknown ldx opcode");
                if (ins.dst > 9) fail(pc, "load destination must be r0..r9");
                if (ins.src > 10) fail(pc, "bad address register");
                break;
            case CLS_ST:
            case CLS_STX:
                if ((ins.opcode & 0xe0) != 0x60) fail(pc, "unknown store opcode");
                if (ins.dst > 10) fail(pc, "bad address register");
                if (ins.cls() == CLS_STX && ins.src > 10) fail(pc, "bad source register");
                break;
            case CLS_JMP: {
                uint8_t op = ins.opcode & 0xf0;
                if (op == JMP_CALL) {
                    if (ins.src == CALL_SRC_SYSCALL) {
                        if (!table.has_id(uint32_t(ins.imm)))
                            fail(pc, "unknown syscall immediate " + std::to_string(uint32_t(ins.imm)));
                    } else if (ins.src == CALL_SRC_LOCAL) {
                        int64_t target = int64_t(pc) + 1 + ins.imm;
                        check_jump_target(pc, target);
                        prog.local_functions.insert(uint64_t(target));
                    } else {
                        fail(pc, "bad call source flag");
                    }
                    break;
                }
                if (op == JMP_EXIT) break;
                bool known = op == JMP_JA || op == JMP_JEQ || op == JMP_JGT || op == JMP_JGE ||
                             op == JMP_JNE || op == JMP_JSGT || op == JMP_JSGE || op == JMP_JLT ||
                             op == JMP_JLE || op == JMP_JSLT || op == JMP_JSLE;
                if (!known) fail(pc, "unknown jump opcode");
                if (op == JMP_JA && (ins.is_reg_src() || ins.dst || ins.src)) fail(pc, "malformed ja");
                if (op != JMP_JA) {
                    if (ins.dst > 10) fail(pc, "bad compare register");
                    if (ins.is_reg_src() && ins.src > 10) fail(pc, "bad compare register");
                }
                check_jump_target(pc, int64_t(pc) + 1 + ins.offset);
                break;
            }
            default:
                fail(pc, "unknown instruction class");
        }
    }
    return prog;
}

// --- minimal ELF64 reader ---------------------------------------------------

Bytes elf_extract_text(const Bytes& img) {
    auto need = [&](size_t off, size_t len) {
        if (off + len > img.size() || off + len < off) throw LoadError("elf: truncated image");
    };
    need(0, 64);
    if (img[0] != 0x7f || img[1] != 'E' || img[2] != 'L' || img[3] != 'F') throw LoadError("elf: bad magic");
    if (img[4] != 2 || img[5] != 1) throw LoadError("elf: expected 64-bit little-endian");

    uint64_t shoff = read_le64(img.data() + 0x28);
    uint16_t shentsize = read_le16(img.data() + 0x3a);
    uint16_t shnum = read_le16(img.data() + 0x3c);
    uint16_t shstrndx = read_le16(img.data() + 0x3e);
    if (shentsize < 64 || shstrndx >= shnum) throw LoadError("elf: bad section headers");
    need(shoff, uint64_t(shentsize) * shnum);

    auto sh = [&](uint16_t i, size_t field) { return img.data() + shoff + uint64_t(i) * shentsize + field; };
    uint64_t stroff = read_le64(sh(shstrndx, 0x18));
    uint64_t strsize = read_le64(sh(shstrndx, 0x20));
    need(stroff, strsize);

    for (uint16_t i = 0; i < shnum; i++) {
        uint32_t name_off = read_le32(sh(i, 0x00));
        if (name_off >= strsize) continue;
        const char* name = reinterpret_cast<const char*>(img.data() + stroff + name_off);
        size_t maxlen = strsize - name_off;
        if (std::strncmp(name, ".text", std::min<size_t>(6, maxlen)) == 0) {
            uint64_t off = read_le64(sh(i, 0x18));
            uint64_t size = read_le64(sh(i, 0x20));
            need(off, size);
            return Bytes(img.begin() + off, img.begin() + off + size);
        }
    }
    throw LoadError("elf: no .text section");
}

}  // namespace solfuzz
