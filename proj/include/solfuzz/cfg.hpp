// Static edge accounting for the coverage map. The estimate comes from a
// single linear scan; the brute-force count enumerates every instruction's
// possible control transfers. They agree when each helper function has
// exactly one call site and no conditional branch targets its own
// fall-through, which is the discipline the bundled programs follow; runtime
// coverage can then be read as a fraction of the estimate.
#pragma once

#include "solfuzz/program.hpp"

namespace solfuzz {

// cond jump: 2; JA, CALL (either flavor), EXIT: 1; straight-line: 0
uint64_t cfg_edge_estimate(const EbpfProgram& prog);

// Sums per-instruction successor-set sizes. EXIT successors are the return
// sites of the containing function's call sites (layout rule: a pc belongs
// to the closest function start at or below it); the entry function's EXIT
// is the self-edge emitted on completion.
uint64_t cfg_edge_bruteforce(const EbpfProgram& prog);

}  // namespace solfuzz
