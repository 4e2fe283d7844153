#include "solfuzz/cfg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace solfuzz {

uint64_t cfg_edge_estimate(const EbpfProgram& prog) {
    uint64_t edges = 0;
    for (uint64_t pc = 0; pc < prog.insn_count(); pc++) {
        if (!prog.insn_start[pc]) continue;
        uint8_t op = prog.insns[pc].opcode;
        if (op == OP_JA || op == OP_CALL || op == OP_EXIT)
            edges += 1;
        else if (is_cond_jump(op))
            edges += 2;
    }
    return edges;
}

uint64_t cfg_edge_bruteforce(const EbpfProgram& prog) {
    // function starts in layout order: entry plus every local call target
    std::vector<uint64_t> starts{0};
    starts.insert(starts.end(), prog.local_functions.begin(), prog.local_functions.end());
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    auto containing = [&](uint64_t pc) {
        auto it = std::upper_bound(starts.begin(), starts.end(), pc);
        return *std::prev(it);
    };

    std::map<uint64_t, std::set<uint64_t>> return_sites;  // function start -> {call pc + 1}
    for (uint64_t pc = 0; pc < prog.insn_count(); pc++) {
        if (!prog.insn_start[pc]) continue;
        const Insn& ins = prog.insns[pc];
        if (ins.opcode == OP_CALL && ins.src == CALL_SRC_LOCAL)
            return_sites[pc + 1 + uint64_t(int64_t(ins.imm))].insert(pc + 1);
    }

    uint64_t edges = 0;
    for (uint64_t pc = 0; pc < prog.insn_count(); pc++) {
        if (!prog.insn_start[pc]) continue;
        const Insn& ins = prog.insns[pc];
        std::set<uint64_t> succ;
        if (ins.opcode == OP_JA) {
            succ.insert(pc + 1 + uint64_t(int64_t(ins.offset)));
        } else if (ins.opcode == OP_CALL) {
            if (ins.src == CALL_SRC_LOCAL)
                succ.insert(pc + 1 + uint64_t(int64_t(ins.imm)));
            else
                succ.insert(pc + 1);
        } else if (ins.opcode == OP_EXIT) {
            uint64_t fn = containing(pc);
            if (fn == 0)
                succ.insert(pc);  // completion self-edge
            else if (auto it = return_sites.find(fn); it != return_sites.end())
                succ = it->second;
        } else if (is_cond_jump(ins.opcode)) {
            succ.insert(pc + 1 + uint64_t(int64_t(ins.offset)));
            succ.insert(pc + 1);
        }
        edges += succ.size();
    }
    return edges;
}

}  // namespace solfuzz
