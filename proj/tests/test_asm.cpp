#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "solfuzz/assembler.hpp"
#include "solfuzz/isa.hpp"
#include "solfuzz/program.hpp"

using namespace solfuzz;

TEST_CASE("minimal program encodes to known bytes") {
    auto p = assemble("mov64 r0, 0\nexit\n");
    REQUIRE(p.text.size() == 16);
    const uint8_t expect[16] = {0xb7, 0, 0, 0, 0, 0, 0, 0, 0x95, 0, 0, 0, 0, 0, 0, 0};
    CHECK(Bytes(expect, expect + 16) == p.text);
}

TEST_CASE("operand encodings") {
    auto p = assemble(
        "add64 r1, r2\n"
        "add64 r3, -7\n"
        "ldxdw r4, [r1+16]\n"
        "stxb [r10-8], r5\n"
        "stw [r2+4], 258\n"
        "lddw r6, 0x1122334455667788\n"
        "lddw r7, \"ab\"\n"
        "exit\n");
    auto ins0 = decode_insn(p.text.data());
    CHECK(ins0.opcode == (CLS_ALU64 | SRC_REG | ALU_ADD));
    CHECK(ins0.dst == 1);
    CHECK(ins0.src == 2);
    auto ins1 = decode_insn(p.text.data() + 8);
    CHECK(ins1.opcode == (CLS_ALU64 | SRC_IMM | ALU_ADD));
    CHECK(ins1.imm == -7);
    auto ins2 = decode_insn(p.text.data() + 16);
    CHECK(ins2.opcode == 0x79);  // ldxdw
    CHECK(ins2.src == 1);
    CHECK(ins2.offset == 16);
    auto ins3 = decode_insn(p.text.data() + 24);
    CHECK(ins3.opcode == 0x73);  // stxb
    CHECK(ins3.dst == 10);
    CHECK(ins3.offset == -8);
    auto ins4 = decode_insn(p.text.data() + 32);
    CHECK(ins4.opcode == 0x62);  // stw imm
    CHECK(ins4.imm == 258);
    // lddw occupies two slots; imm64 split little-endian low/high
    auto prog = load_program(p.text, ProgramFormat::Flat, p.syscalls);
    CHECK(prog.imm64_at(5) == 0x1122334455667788ull);
    CHECK(prog.imm64_at(7) == 0x6261ull);  // "ab" packed little-endian
}

TEST_CASE("labels and jumps") {
    auto p = assemble(
        "start:\n"
        "  jeq r1, r2, done\n"
        "  jgt r1, 100, done\n"
        "  ja start\n"
        "done:\n"
        "  exit\n");
    CHECK(p.labels.at("start") == 0);
    CHECK(p.labels.at("done") == 3);
    auto j0 = decode_insn(p.text.data());
    CHECK(j0.offset == 2);  // 0 + 1 + 2 = 3
    auto j2 = decode_insn(p.text.data() + 16);
    CHECK(j2.offset == -3);  // 2 + 1 - 3 = 0
}

TEST_CASE("calls resolve syscalls by name and labels locally") {
    auto p = assemble(
        ".syscall my_ext 77\n"
        "call sol_log\n"
        "call my_ext\n"
        "call helper\n"
        "exit\n"
        "helper:\n"
        "  exit\n");
    auto c0 = decode_insn(p.text.data());
    CHECK(c0.opcode == OP_CALL);
    CHECK(c0.src == CALL_SRC_SYSCALL);
    CHECK(c0.imm == 1);
    auto c1 = decode_insn(p.text.data() + 8);
    CHECK(c1.imm == 77);
    auto c2 = decode_insn(p.text.data() + 16);
    CHECK(c2.src == CALL_SRC_LOCAL);
    CHECK(c2.imm == 1);  // 2 + 1 + 1 = 4
    auto prog = load_program(p.text, ProgramFormat::Flat, p.syscalls);
    CHECK(prog.local_functions.count(4) == 1);
}

TEST_CASE("assembly errors carry line numbers") {
    CHECK_THROWS_WITH_AS(assemble("bogus r1, r2\n"), doctest::Contains("line 1"), AsmError);
    CHECK_THROWS_AS(assemble("mov64 r11, 0\n"), AsmError);
    CHECK_THROWS_AS(assemble("ja nowhere\n"), AsmError);
    CHECK_THROWS_AS(assemble("x:\nx:\n  exit\n"), AsmError);
    CHECK_THROWS_AS(assemble("lddw r1, \"ninechars!\"\n"), AsmError);
    CHECK_THROWS_AS(assemble("call not_a_thing\n"), AsmError);
    CHECK_THROWS_AS(assemble(".syscall broken\n"), AsmError);
}

TEST_CASE("disassembly round-trips every mnemonic") {
    const char* src =
        ".syscall custom_thing 99\n"
        "entry:\n"
        "  mov64 r6, r1\n"
        "  add64 r6, 8\n"
        "  sub64 r6, r0\n"
        "  mul64 r6, 3\n"
        "  div64 r6, r2\n"
        "  mod64 r6, 7\n"
        "  and64 r6, 0xff\n"
        "  or64 r6, r3\n"
        "  xor64 r6, r6\n"
        "  lsh64 r6, 4\n"
        "  rsh64 r6, r4\n"
        "  arsh64 r6, 1\n"
        "  neg64 r6\n"
        "  lddw r7, 0xdeadbeefcafef00d\n"
        "  ldxb r0, [r1+0]\n"
        "  ldxh r0, [r1+2]\n"
        "  ldxw r0, [r1+4]\n"
        "  ldxdw r0, [r1+8]\n"
        "  stb [r10-1], 1\n"
        "  sth [r10-4], 2\n"
        "  stw [r10-8], 3\n"
        "  stdw [r10-16], 4\n"
        "  stxb [r10-1], r0\n"
        "  stxh [r10-4], r0\n"
        "  stxw [r10-8], r0\n"
        "  stxdw [r10-16], r0\n"
        "  jeq r1, r2, out\n"
        "  jne r1, 0, out\n"
        "  jgt r1, r2, out\n"
        "  jge r1, 1, out\n"
        "  jlt r1, r2, out\n"
        "  jle r1, 2, out\n"
        "  jsgt r1, -1, out\n"
        "  jsge r1, r2, out\n"
        "  jslt r1, -2, out\n"
        "  jsle r1, r2, out\n"
        "  call custom_thing\n"
        "  call sol_log\n"
        "  call helper\n"
        "  ja out\n"
        "helper:\n"
        "  exit\n"
        "out:\n"
        "  mov64 r0, 0\n"
        "  exit\n";
    auto p1 = assemble(src);
    auto prog = load_program(p1.text, ProgramFormat::Flat, p1.syscalls);
    std::string round = disassemble(prog);
    auto p2 = assemble(round);
    CHECK(p1.text == p2.text);
}

TEST_CASE("single-line disassembly uses relative offsets") {
    auto p = assemble("ja next\nnext: exit\n");
    auto prog = load_program(p.text, ProgramFormat::Flat, p.syscalls);
    CHECK(disassemble_insn(prog, 0) == "ja +0");
    CHECK(disassemble_insn(prog, 1) == "exit");
}
