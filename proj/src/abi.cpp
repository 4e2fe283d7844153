#include "solfuzz/abi.hpp"

#include <algorithm>

#include "solfuzz/base58.hpp"

namespace solfuzz {
namespace {

uint64_t pad8(uint64_t n) { return (n + 7) & ~7ull; }

void put_bytes(Bytes& out, const uint8_t* p, size_t n) { out.insert(out.end(), p, p + n); }

}  // namespace

std::pair<Bytes, InputLayoutMap> serialize(const Instruction& instr, const LedgerSnapshot& snap) {
    Bytes out;
    InputLayoutMap layout;
    append_le64(out, instr.account_metas.size());

    for (size_t i = 0; i < instr.account_metas.size(); i++) {
        const AccountMeta& meta = instr.account_metas[i];
        AccountRange r;
        r.pubkey = meta.pubkey;
        r.is_signer = meta.is_signer;
        r.is_writable = meta.is_writable;
        r.entry_start = out.size();

        size_t first = i;
        for (size_t j = 0; j < i; j++) {
            if (instr.account_metas[j].pubkey == meta.pubkey) {
                first = j;
                break;
            }
        }
        if (first != i) {
            r.dup = true;
            r.dup_of = uint32_t(first);
            out.push_back(uint8_t(first));
            out.resize(out.size() + 7, 0);
            r.entry_end = out.size();
            layout.accounts.push_back(r);
            continue;
        }

        const Account* acct = snap.find(meta.pubkey);
        if (!acct) throw ConfigError("serialize: account not in snapshot: " + base58_encode(meta.pubkey));
        r.meta = out.size();
        out.push_back(0xff);
        out.push_back(meta.is_signer ? 1 : 0);
        out.push_back(meta.is_writable ? 1 : 0);
        out.push_back(acct->executable ? 1 : 0);
        out.resize(out.size() + 4, 0);
        r.pubkey_off = out.size();
        put_bytes(out, acct->pubkey.data(), 32);
        r.owner = out.size();
        put_bytes(out, acct->owner.data(), 32);
        r.lamports = out.size();
        append_le64(out, acct->lamports);
        r.data_len = out.size();
        append_le64(out, acct->data.size());
        r.data = out.size();
        r.data_size = acct->data.size();
        put_bytes(out, acct->data.data(), acct->data.size());
        out.resize(out.size() + (pad8(acct->data.size()) - acct->data.size()), 0);
        r.rent_epoch = out.size();
        append_le64(out, acct->rent_epoch);
        r.entry_end = out.size();
        layout.accounts.push_back(r);
    }

    layout.instr_len_off = out.size();
    append_le64(out, instr.data.size());
    layout.instr_data_off = out.size();
    layout.instr_data_size = instr.data.size();
    put_bytes(out, instr.data.data(), instr.data.size());
    layout.program_id_off = out.size();
    put_bytes(out, instr.program_id.data(), 32);
    layout.total_size = out.size();
    return {std::move(out), std::move(layout)};
}

std::optional<FieldRef> InputLayoutMap::locate(uint64_t off) const {
    if (off >= total_size) return std::nullopt;
    for (size_t i = 0; i < accounts.size(); i++) {
        const AccountRange& r = accounts[i];
        if (off < r.entry_start || off >= r.entry_end) continue;
        int idx = int(i);
        if (r.dup) return FieldRef{idx, FieldKind::Meta, off - r.entry_start};
        if (off < r.pubkey_off) return FieldRef{idx, FieldKind::Meta, off - r.meta};
        if (off < r.owner) return FieldRef{idx, FieldKind::Pubkey, off - r.pubkey_off};
        if (off < r.lamports) return FieldRef{idx, FieldKind::Owner, off - r.owner};
        if (off < r.data_len) return FieldRef{idx, FieldKind::Lamports, off - r.lamports};
        if (off < r.data) return FieldRef{idx, FieldKind::DataLen, off - r.data_len};
        if (off < r.data + r.data_size) return FieldRef{idx, FieldKind::Data, off - r.data};
        if (off < r.rent_epoch) return std::nullopt;  // data alignment padding
        return FieldRef{idx, FieldKind::RentEpoch, off - r.rent_epoch};
    }
    if (off >= instr_data_off && off < instr_data_off + instr_data_size)
        return FieldRef{-1, FieldKind::InstructionData, off - instr_data_off};
    if (off >= program_id_off && off < program_id_off + 32)
        return FieldRef{-1, FieldKind::ProgramId, off - program_id_off};
    return std::nullopt;  // count or length fields
}

std::optional<FieldRef> InputLayoutMap::locate_addr(uint64_t vm_addr) const {
    if (vm_addr < MM_INPUT_START) return std::nullopt;
    return locate(vm_addr - MM_INPUT_START);
}

std::vector<DeserializedAccount> deserialize_accounts(const Bytes& blob,
                                                      const InputLayoutMap& layout) {
    std::vector<DeserializedAccount> out;
    for (const AccountRange& r : layout.accounts) {
        DeserializedAccount a;
        a.dup = r.dup;
        a.dup_of = r.dup_of;
        if (r.dup) {
            a.pubkey = r.pubkey;
            out.push_back(std::move(a));
            continue;
        }
        a.is_signer = blob[r.meta + 1] != 0;
        a.is_writable = blob[r.meta + 2] != 0;
        a.executable = blob[r.meta + 3] != 0;
        std::copy_n(blob.data() + r.pubkey_off, 32, a.pubkey.begin());
        std::copy_n(blob.data() + r.owner, 32, a.owner.begin());
        a.lamports = read_le64(blob.data() + r.lamports);
        a.rent_epoch = read_le64(blob.data() + r.rent_epoch);
        a.data.assign(blob.begin() + r.data, blob.begin() + r.data + r.data_size);
        out.push_back(std::move(a));
    }
    return out;
}

std::optional<ErrorReason> writeback(const Bytes& baseline, const Bytes& current,
                                     const InputLayoutMap& layout, LedgerSnapshot& working) {
    // Walk the byte diff: writable lamports/data mark their account for
    // copy-back, padding and instruction-side bytes are discarded, everything
    // else is off-limits.
    std::vector<bool> touched(layout.accounts.size(), false);
    for (uint64_t off = 0; off < layout.total_size; off++) {
        if (baseline[off] == current[off]) continue;
        bool handled = false;
        for (size_t i = 0; i < layout.accounts.size() && !handled; i++) {
            const AccountRange& r = layout.accounts[i];
            if (off < r.entry_start || off >= r.entry_end) continue;
            if (r.dup) return ErrorReason::WriteViolation;
            bool in_lamports = off >= r.lamports && off < r.lamports + 8;
            bool in_data = off >= r.data && off < r.data + r.data_size;
            bool in_data_pad = off >= r.data + r.data_size && off < r.rent_epoch;
            if (in_data_pad) {
                handled = true;  // dropped
                break;
            }
            if (!in_lamports && !in_data) return ErrorReason::WriteViolation;
            if (!r.is_writable) return ErrorReason::WriteViolation;
            touched[i] = true;
            handled = true;
        }
        if (handled) continue;
        // instruction data and program id scribbles don't persist anywhere
        if (off >= layout.instr_data_off && off < layout.program_id_off + 32) continue;
        return ErrorReason::WriteViolation;  // count or instr_len fields
    }

    const uint64_t before = working.total_lamports();
    for (size_t i = 0; i < layout.accounts.size(); i++) {
        if (!touched[i]) continue;
        const AccountRange& r = layout.accounts[i];
        Account* acct = working.find(r.pubkey);
        if (!acct) return ErrorReason::WriteViolation;
        acct->lamports = read_le64(current.data() + r.lamports);
        acct->data.assign(current.begin() + r.data, current.begin() + r.data + r.data_size);
    }
    if (working.total_lamports() != before) return ErrorReason::Imbalanced;
    return std::nullopt;
}

}  // namespace solfuzz
