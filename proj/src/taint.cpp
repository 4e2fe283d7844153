#include "solfuzz/taint.hpp"

#include <algorithm>

namespace solfuzz {

void add_label(LabelSet& set, const TaintLabel& l) {
    if (std::find(set.begin(), set.end(), l) == set.end()) set.push_back(l);
}

void merge_labels(LabelSet& dst, const LabelSet& src) {
    for (const TaintLabel& l : src) add_label(dst, l);
}

bool has_kind(const LabelSet& set, TaintKind k) {
    return std::any_of(set.begin(), set.end(),
                       [k](const TaintLabel& l) { return l.kind == k; });
}

std::vector<ComparisonFact> extract_facts(const TaintCompare& cmp) {
    std::vector<ComparisonFact> out;
    auto emit = [&](ComparisonFact f) {
        f.pc = cmp.pc;
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
    };
    auto cross = [&](const LabelSet& a, const LabelSet& b) {
        for (const TaintLabel& la : a) {
            if (la.kind == TaintKind::AccountData && b.empty()) {
                ComparisonFact f;
                f.kind = ComparisonFact::Kind::DataVsConst;
                f.data_account = la.account;
                emit(f);
            }
            for (const TaintLabel& lb : b) {
                if (la.kind == TaintKind::AccountData && lb.kind == TaintKind::AccountPubkey) {
                    ComparisonFact f;
                    f.kind = ComparisonFact::Kind::DataVsPubkey;
                    f.data_account = la.account;
                    f.pubkey_account = lb.account;
                    emit(f);
                }
                if (la.kind == TaintKind::AccountPubkey && lb.kind == TaintKind::PdaResult) {
                    ComparisonFact f;
                    f.kind = ComparisonFact::Kind::PubkeyVsPdaResult;
                    f.pubkey_account = la.account;
                    f.pda_id = lb.pda_id;
                    emit(f);
                }
            }
        }
    };
    cross(cmp.lhs_labels, cmp.rhs_labels);
    cross(cmp.rhs_labels, cmp.lhs_labels);
    // symmetric pubkey-vs-pubkey, reported once with lhs-side first
    for (const TaintLabel& la : cmp.lhs_labels)
        for (const TaintLabel& lb : cmp.rhs_labels)
            if (la.kind == TaintKind::AccountPubkey && lb.kind == TaintKind::AccountPubkey) {
                ComparisonFact f;
                f.kind = ComparisonFact::Kind::PubkeyVsPubkey;
                f.pubkey_account = la.account;
                f.other_pubkey_account = lb.account;
                emit(f);
            }
    return out;
}

LabelSet TaintEngine::memory_labels(uint64_t addr, int width) const {
    LabelSet out;
    for (int i = 0; i < width; i++) {
        auto it = shadow_.find(addr + uint64_t(i));
        if (it != shadow_.end()) merge_labels(out, it->second);
    }
    return out;
}

std::optional<TaintLabel> TaintEngine::input_label(uint64_t addr) const {
    if (!layout_) return std::nullopt;
    auto ref = layout_->locate_addr(addr);
    if (!ref || ref->account < 0) return std::nullopt;
    switch (ref->kind) {
        case FieldKind::Data: return TaintLabel::data(ref->account, ref->offset);
        case FieldKind::Pubkey: return TaintLabel::pubkey(ref->account, uint32_t(ref->offset / 8));
        default: return std::nullopt;  // owner/lamports/meta/len fields stay clean
    }
}

void TaintEngine::on_alu(const Vm&, uint64_t, const Insn& insn, bool wrapped) {
    const uint8_t op = insn.opcode & 0xf0;
    if (op == ALU_MOV) {
        if (insn.is_reg_src())
            regs_[insn.dst] = regs_[insn.src];
        else
            regs_[insn.dst].clear();
    } else if (op != ALU_NEG && insn.is_reg_src() && insn.dst != insn.src) {
        merge_labels(regs_[insn.dst], regs_[insn.src]);
    }
    if (wrapped) add_label(regs_[insn.dst], TaintLabel::overflowed());
}

void TaintEngine::on_lddw(const Vm&, uint64_t, uint8_t dst) { regs_[dst].clear(); }

void TaintEngine::on_mem_read(const Vm&, uint64_t, uint64_t addr, int width, int dst_reg) {
    LabelSet labels;
    if (addr >= MM_INPUT_START) {
        if (auto l = input_label(addr)) labels.push_back(*l);
    } else {
        labels = memory_labels(addr, width);
    }
    regs_[dst_reg] = std::move(labels);
}

void TaintEngine::on_mem_write(const Vm&, uint64_t, uint64_t addr, int width, const uint8_t*,
                               const uint8_t*, int src_reg) {
    if (addr >= MM_INPUT_START) return;  // input bytes re-derive labels on load
    for (int i = 0; i < width; i++) shadow_.erase(addr + uint64_t(i));
    if (src_reg >= 0 && !regs_[src_reg].empty())
        for (int i = 0; i < width; i++) shadow_[addr + uint64_t(i)] = regs_[src_reg];
}

void TaintEngine::on_reg_compare(const Vm&, uint64_t pc, int lhs_reg, int rhs_reg,
                                 uint64_t lhs_val, uint64_t rhs_val) {
    if (!compare_sink) return;
    TaintCompare cmp;
    cmp.pc = pc;
    cmp.lhs_reg = lhs_reg;
    cmp.rhs_reg = rhs_reg;
    cmp.lhs_val = lhs_val;
    cmp.rhs_val = rhs_val;
    cmp.lhs_labels = regs_[lhs_reg];
    if (rhs_reg >= 0) cmp.rhs_labels = regs_[rhs_reg];
    compare_sink(cmp);
}

void TaintEngine::on_syscall(const Vm&, uint64_t, uint32_t, const uint64_t*) {
    regs_[0].clear();  // syscall results are fresh values
}

void TaintEngine::on_pda_result(const Vm&, uint64_t pc, uint64_t result_addr,
                                const std::vector<std::pair<uint64_t, uint64_t>>& seed_slices) {
    if (result_addr >= MM_INPUT_START) return;
    const uint64_t id = pda_structure_id(pc, seed_slices.size());
    for (uint32_t i = 0; i < 32; i++)
        shadow_[result_addr + i] = {TaintLabel::pda(id, i / 8)};
}

void TaintEngine::on_local_call(const Vm&, uint64_t, uint64_t, const uint64_t*) {
    frames_.push_back({regs_[6], regs_[7], regs_[8], regs_[9]});
}

void TaintEngine::on_instruction_retired(const Vm&, uint64_t, const Insn& insn) {
    if (insn.opcode == OP_EXIT && !frames_.empty()) {
        for (int i = 0; i < 4; i++) regs_[6 + i] = std::move(frames_.back()[i]);
        frames_.pop_back();
    }
}

}  // namespace solfuzz
