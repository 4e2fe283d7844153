// Dynamic taint tracking over VM execution. Values loaded from account data,
// account pubkeys, or PDA derivation results carry labels; arithmetic mixes
// them, moves copy them, clean redefinitions clear them, and wrapping
// arithmetic adds an overflow mark. Conditional jumps surface the label sets
// and raw values of both operands so the vulnerability oracles can reason
// about what the program compared against what.
#pragma once

#include <functional>
#include <map>

#include "solfuzz/abi.hpp"
#include "solfuzz/vm.hpp"

namespace solfuzz {

enum class TaintKind : uint8_t {
    AccountData,    // loaded from an account's data field
    AccountPubkey,  // loaded from an account's pubkey field
    PdaResult,      // loaded from a derived program address
    Overflowed,     // passed through wrapping arithmetic
};

struct TaintLabel {
    TaintKind kind = TaintKind::Overflowed;
    int32_t account = -1;  // AccountData / AccountPubkey: instruction account index
    uint32_t chunk = 0;    // AccountPubkey / PdaResult: 8-byte chunk (0..3)
    uint64_t offset = 0;   // AccountData: data offset the load started at
    uint64_t pda_id = 0;   // PdaResult: seed structure id

    bool operator==(const TaintLabel&) const = default;

    static TaintLabel data(int32_t acct, uint64_t off) {
        TaintLabel l;
        l.kind = TaintKind::AccountData, l.account = acct, l.offset = off;
        return l;
    }
    static TaintLabel pubkey(int32_t acct, uint32_t chunk) {
        TaintLabel l;
        l.kind = TaintKind::AccountPubkey, l.account = acct, l.chunk = chunk;
        return l;
    }
    static TaintLabel pda(uint64_t id, uint32_t chunk) {
        TaintLabel l;
        l.kind = TaintKind::PdaResult, l.pda_id = id, l.chunk = chunk;
        return l;
    }
    static TaintLabel overflowed() { return TaintLabel{}; }
};

// Small deduplicated set.
using LabelSet = std::vector<TaintLabel>;
void add_label(LabelSet& set, const TaintLabel& l);
void merge_labels(LabelSet& dst, const LabelSet& src);
bool has_kind(const LabelSet& set, TaintKind k);

// Seed structure / PdaResult identity: stable across runs, derived from the
// derivation call site and seed count.
inline uint64_t pda_structure_id(uint64_t call_pc, uint64_t seed_count) {
    return fnv1a64_u64(seed_count, fnv1a64_u64(call_pc));
}

// One conditional jump with the taint view of both operands.
struct TaintCompare {
    uint64_t pc = 0;
    int lhs_reg = 0;
    int rhs_reg = -1;  // -1: immediate
    uint64_t lhs_val = 0;
    uint64_t rhs_val = 0;
    LabelSet lhs_labels;
    LabelSet rhs_labels;
};

// Distilled comparison relations the oracles consume.
struct ComparisonFact {
    enum class Kind {
        DataVsPubkey,       // account data compared against an account pubkey
        PubkeyVsPubkey,     // two account pubkeys compared
        PubkeyVsPdaResult,  // account pubkey compared against a derived address
        DataVsConst,        // account data compared against an untainted value
    };
    Kind kind = Kind::DataVsConst;
    int32_t data_account = -1;    // DataVsPubkey / DataVsConst
    int32_t pubkey_account = -1;  // the AccountPubkey side
    int32_t other_pubkey_account = -1;  // PubkeyVsPubkey second side
    uint64_t pda_id = 0;                // PubkeyVsPdaResult
    uint64_t pc = 0;

    bool operator==(const ComparisonFact&) const = default;
};

std::vector<ComparisonFact> extract_facts(const TaintCompare& cmp);

class TaintEngine : public VmHooks {
  public:
    // The layout map must outlive the engine and describe the VM's input.
    explicit TaintEngine(const InputLayoutMap* layout) : layout_(layout) {}

    std::function<void(const TaintCompare&)> compare_sink;

    const LabelSet& reg_labels(int r) const { return regs_[r]; }
    void set_reg_labels(int r, LabelSet s) { regs_[r] = std::move(s); }
    // Union of the per-byte labels at [addr, addr+width).
    LabelSet memory_labels(uint64_t addr, int width) const;

    void on_alu(const Vm& vm, uint64_t pc, const Insn& insn, bool wrapped) override;
    void on_lddw(const Vm& vm, uint64_t pc, uint8_t dst) override;
    void on_mem_read(const Vm& vm, uint64_t pc, uint64_t addr, int width, int dst_reg) override;
    void on_mem_write(const Vm& vm, uint64_t pc, uint64_t addr, int width,
                      const uint8_t* old_bytes, const uint8_t* new_bytes, int src_reg) override;
    void on_reg_compare(const Vm& vm, uint64_t pc, int lhs_reg, int rhs_reg, uint64_t lhs_val,
                        uint64_t rhs_val) override;
    void on_syscall(const Vm& vm, uint64_t pc, uint32_t id, const uint64_t* args) override;
    void on_pda_result(const Vm& vm, uint64_t pc, uint64_t result_addr,
                       const std::vector<std::pair<uint64_t, uint64_t>>& seed_slices) override;
    void on_local_call(const Vm& vm, uint64_t pc, uint64_t target_pc,
                       const uint64_t* args) override;
    void on_instruction_retired(const Vm& vm, uint64_t pc, const Insn& insn) override;

  private:
    // Label for a load whose first byte is at `addr` in the input region.
    std::optional<TaintLabel> input_label(uint64_t addr) const;

    const InputLayoutMap* layout_;
    LabelSet regs_[11];
    // Per-byte labels for scratch memory (stack/heap). Input-region bytes are
    // never shadowed: loads from them always re-derive from the layout.
    std::map<uint64_t, LabelSet> shadow_;
    // r6..r9 label sets saved across local calls, mirroring the VM frames.
    std::vector<std::array<LabelSet, 4>> frames_;
};

}  // namespace solfuzz
