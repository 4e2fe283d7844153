// Assembly fixtures shared across test binaries.
#pragma once

#include <string>

namespace fixtures {

// Walks the serialized input: afterwards r2 holds the account count, r3
// points at the instruction section (u64 length, then bytes, then program
// id) and the stack slots [r10-128 + 8*i] hold resolved per-account entry
// pointers (duplicate entries point at their originals).
inline const char* kWalkPrologue = R"(
    ldxdw r2, [r1+0]
    mov64 r3, r1
    add64 r3, 8
    mov64 r4, 0
    mov64 r5, r10
    add64 r5, -128
next_acct:
    jge r4, r2, walk_done
    ldxb r6, [r3+0]
    jeq r6, 0xff, full_entry
    lsh64 r6, 3
    mov64 r7, r10
    add64 r7, -128
    add64 r7, r6
    ldxdw r7, [r7+0]
    stxdw [r5+0], r7
    add64 r3, 8
    ja next_iter
full_entry:
    stxdw [r5+0], r3
    ldxdw r6, [r3+80]
    add64 r6, 7
    and64 r6, -8
    add64 r6, 96
    add64 r3, r6
next_iter:
    add64 r5, 8
    add64 r4, 1
    ja next_acct
walk_done:
)";

// Debits account 0 by a caller-supplied amount. The unchecked variant wraps
// on underflow; the checked variant rejects overdrafts first.
inline std::string debit_program(bool checked) {
    std::string body = std::string(kWalkPrologue) +
                       "    ldxdw r7, [r3+0]\n"
                       "    jlt r7, 8, err\n"
                       "    ldxdw r7, [r3+8]\n"
                       "    ldxdw r6, [r10-128]\n"
                       "    ldxdw r5, [r6+72]\n";
    if (checked) body += "    jgt r7, r5, err\n";
    body +=
        "    sub64 r5, r7\n"
        "    stxdw [r6+72], r5\n"
        "    mov64 r0, 0\n"
        "    exit\n"
        "err:\n"
        "    mov64 r0, 1\n"
        "    exit\n";
    return body;
}

}  // namespace fixtures
