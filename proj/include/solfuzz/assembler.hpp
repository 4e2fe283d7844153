// Two-pass text assembler and a round-trippable disassembler for the
// interpreter's instruction subset.
//
// Syntax (one instruction per line; ';', '#', '//' start comments):
//   label:                      ; pc marker, usable as jump/call target
//   .syscall <name> <id>        ; extend the syscall table for this program
//   mov64 r1, 7                 ; ALU: add64 sub64 mul64 div64 mod64 and64
//   add64 r1, r2                ;      or64 xor64 lsh64 rsh64 arsh64 mov64
//   neg64 r1                    ; single-operand
//   lddw r2, 0x1122334455667788 ; 64-bit immediate (two instruction slots)
//   lddw r3, "vault"            ; <=8 chars packed little-endian, zero padded
//   ldxdw r4, [r1+16]           ; loads: ldxb ldxh ldxw ldxdw
//   stxdw [r10-8], r4           ; reg stores: stxb stxh stxw stxdw
//   stb [r1+0], 3               ; imm stores: stb sth stw stdw
//   jeq r1, r2, out             ; jumps: ja jeq jne jgt jge jlt jle
//   jsgt r1, -5, out            ;        jsgt jsge jslt jsle (reg or imm)
//   call sol_log                ; syscall by table name
//   call verify                 ; local call by label
//   exit
#pragma once

#include <map>
#include <string>

#include "solfuzz/common.hpp"
#include "solfuzz/program.hpp"

namespace solfuzz {

struct AssembledProgram {
    Bytes text;
    SyscallTable syscalls;                    // defaults plus .syscall lines
    std::map<std::string, uint64_t> labels;   // label -> instruction pc
};

// Throws AsmError("line N: ...") on malformed input.
AssembledProgram assemble(const std::string& source);

// Emits text that assembles back to identical bytes. Jump/call targets come
// out as generated labels (L<pc> / fn_<pc>), syscalls by table name.
std::string disassemble(const EbpfProgram& prog);
std::string disassemble_insn(const EbpfProgram& prog, uint64_t pc);

}  // namespace solfuzz
