// eBPF instruction encoding for the interpreter subset: 64-bit ALU, LDDW,
// byte/half/word/dword loads and stores, jumps, CALL, EXIT.
#pragma once

#include "solfuzz/common.hpp"

namespace solfuzz {

// instruction classes (opcode & 7)
constexpr uint8_t CLS_LD = 0x00;
constexpr uint8_t CLS_LDX = 0x01;
constexpr uint8_t CLS_ST = 0x02;
constexpr uint8_t CLS_STX = 0x03;
constexpr uint8_t CLS_JMP = 0x05;
constexpr uint8_t CLS_ALU64 = 0x07;

// size field for memory ops (opcode & 0x18)
constexpr uint8_t SZ_W = 0x00;   // 4 bytes
constexpr uint8_t SZ_H = 0x08;   // 2 bytes
constexpr uint8_t SZ_B = 0x10;   // 1 byte
constexpr uint8_t SZ_DW = 0x18;  // 8 bytes

// source flag for ALU/JMP (opcode & 0x08)
constexpr uint8_t SRC_IMM = 0x00;
constexpr uint8_t SRC_REG = 0x08;

// load/store mode bits (top three); only register+offset addressing exists
constexpr uint8_t MODE_MEM = 0x60;

// ALU operation (opcode & 0xf0)
constexpr uint8_t ALU_ADD = 0x00;
constexpr uint8_t ALU_SUB = 0x10;
constexpr uint8_t ALU_MUL = 0x20;
constexpr uint8_t ALU_DIV = 0x30;
constexpr uint8_t ALU_OR = 0x40;
constexpr uint8_t ALU_AND = 0x50;
constexpr uint8_t ALU_LSH = 0x60;
constexpr uint8_t ALU_RSH = 0x70;
constexpr uint8_t ALU_NEG = 0x80;
constexpr uint8_t ALU_MOD = 0x90;
constexpr uint8_t ALU_XOR = 0xa0;
constexpr uint8_t ALU_MOV = 0xb0;
constexpr uint8_t ALU_ARSH = 0xc0;

// JMP operation (opcode & 0xf0)
constexpr uint8_t JMP_JA = 0x00;
constexpr uint8_t JMP_JEQ = 0x10;
constexpr uint8_t JMP_JGT = 0x20;
constexpr uint8_t JMP_JGE = 0x30;
constexpr uint8_t JMP_JNE = 0x50;
constexpr uint8_t JMP_JSGT = 0x60;
constexpr uint8_t JMP_JSGE = 0x70;
constexpr uint8_t JMP_CALL = 0x80;
constexpr uint8_t JMP_EXIT = 0x90;
constexpr uint8_t JMP_JLT = 0xa0;
constexpr uint8_t JMP_JLE = 0xb0;
constexpr uint8_t JMP_JSLT = 0xc0;
constexpr uint8_t JMP_JSLE = 0xd0;

constexpr uint8_t OP_LDDW = 0x18;  // CLS_LD | SZ_DW; two slots
constexpr uint8_t OP_CALL = 0x85;
constexpr uint8_t OP_EXIT = 0x95;
constexpr uint8_t OP_JA = 0x05;

// CALL with src=1 is a local (bpf-to-bpf) call; src=0 is a syscall.
constexpr uint8_t CALL_SRC_SYSCALL = 0;
constexpr uint8_t CALL_SRC_LOCAL = 1;

struct Insn {
    uint8_t opcode = 0;
    uint8_t dst = 0;
    uint8_t src = 0;
    int16_t offset = 0;
    int32_t imm = 0;

    uint8_t cls() const { return opcode & 0x07; }
    uint8_t size_field() const { return opcode & 0x18; }
    bool is_reg_src() const { return opcode & SRC_REG; }

    int mem_width() const {
        switch (size_field()) {
            case SZ_B: return 1;
            case SZ_H: return 2;
            case SZ_W: return 4;
            default: return 8;
        }
    }
};

inline Insn decode_insn(const uint8_t* p) {
    Insn i;
    i.opcode = p[0];
    i.dst = p[1] & 0x0f;
    i.src = p[1] >> 4;
    i.offset = int16_t(read_le16(p + 2));
    i.imm = int32_t(read_le32(p + 4));
    return i;
}

inline void encode_insn(uint8_t* p, const Insn& i) {
    p[0] = i.opcode;
    p[1] = uint8_t((i.src << 4) | (i.dst & 0x0f));
    write_le16(p + 2, uint16_t(i.offset));
    write_le32(p + 4, uint32_t(i.imm));
}

inline void append_insn(Bytes& text, const Insn& i) {
    size_t n = text.size();
    text.resize(n + 8);
    encode_insn(text.data() + n, i);
}

// Appends LDDW (two slots).
inline void append_lddw(Bytes& text, uint8_t dst, uint64_t imm64) {
    Insn a{OP_LDDW, dst, 0, 0, int32_t(uint32_t(imm64))};
    Insn b{0, 0, 0, 0, int32_t(uint32_t(imm64 >> 32))};
    append_insn(text, a);
    append_insn(text, b);
}

inline bool is_cond_jump(uint8_t opcode) {
    if ((opcode & 0x07) != CLS_JMP) return false;
    uint8_t op = opcode & 0xf0;
    return op != JMP_JA && op != JMP_CALL && op != JMP_EXIT;
}

}  // namespace solfuzz
