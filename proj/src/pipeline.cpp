#include "solfuzz/pipeline.hpp"

#include <algorithm>

namespace solfuzz {

void SemanticsExtractor::on_pda_result(const Vm& vm, uint64_t pc, uint64_t,
                                       const std::vector<std::pair<uint64_t, uint64_t>>& slices) {
    uint64_t id = pda_structure_id(pc, slices.size());
    for (const auto& s : structures_)
        if (s.id == id) return;

    SeedStructure st;
    st.id = id;
    st.bump_searched = pending_syscall_ == SC_TRY_FIND_PROGRAM_ADDRESS;
    for (const auto& [ptr, len] : slices) {
        SeedElement el;
        el.bytes.resize(len);
        if (len && !vm.peek(ptr, len, el.bytes.data())) return;  // raced away; skip
        if (len == 32) {
            RoleKind role = snap_->role_of(pubkey_from_bytes(el.bytes));
            if (role != RoleKind::None) {
                el.from_pubkey = true;
                el.role = role;
                el.bytes.clear();
            }
        }
        st.elements.push_back(std::move(el));
    }
    structures_.push_back(std::move(st));
}

void SemanticsExtractor::on_mem_write(const Vm&, uint64_t pc, uint64_t addr, int width,
                                      const uint8_t*, const uint8_t*, int src_reg) {
    if (width != 8 || src_reg < 0) return;
    auto ref = layout_->locate_addr(addr);
    if (!ref || ref->account < 0 || ref->kind != FieldKind::Data) return;
    const AccountRange& range = layout_->accounts[ref->account];
    const Account* acct = snap_->find(range.pubkey);
    if (!acct || acct->owner != program_id_) return;  // not this program's data format

    for (const TaintLabel& l : taint_->reg_labels(src_reg)) {
        if (l.kind != TaintKind::AccountPubkey && l.kind != TaintKind::PdaResult) continue;
        if (ref->offset < 8ull * l.chunk) continue;
        uint64_t start = ref->offset - 8ull * l.chunk;
        if (start + 32 > range.data_size) continue;
        AccountWrites& w = writes_[ref->account];
        w.data_len = range.data_size;
        w.pubkey_starts.insert(uint32_t(start));
        w.pcs.insert(pc);
    }
}

std::vector<AccountDataLayout> SemanticsExtractor::data_layouts() const {
    std::vector<AccountDataLayout> out;
    for (const auto& [acct, w] : writes_) {
        AccountDataLayout l;
        l.data_len = w.data_len;
        uint32_t next_free = 0;
        for (uint32_t s : w.pubkey_starts) {
            if (!l.pubkey_offsets.empty() && s < next_free) continue;  // overlap
            l.pubkey_offsets.push_back(s);
            next_free = s + 32;
        }
        uint64_t h = fnv1a64_u64(l.data_len);
        for (uint64_t pc : w.pcs) h = fnv1a64_u64(pc, h);
        l.id = h;
        if (std::none_of(out.begin(), out.end(),
                         [&](const AccountDataLayout& e) { return e.id == l.id; }))
            out.push_back(std::move(l));
    }
    return out;
}

std::vector<OracleAccount> oracle_accounts_for(const Instruction& instr,
                                               const LedgerSnapshot& snap) {
    std::vector<OracleAccount> out;
    for (const AccountMeta& m : instr.account_metas) {
        const Account* a = snap.find(m.pubkey);
        out.push_back({m.pubkey, a ? a->owner : Pubkey{}, m.is_writable});
    }
    return out;
}

}  // namespace solfuzz
