#include "solfuzz/txgen.hpp"

#include <algorithm>

namespace solfuzz {

namespace {

struct ByteReader {
    const Bytes& raw;
    size_t pos = 0;

    uint8_t u8() { return pos < raw.size() ? raw[pos++] : 0; }
    uint16_t u16() {
        uint16_t lo = u8();
        return uint16_t(lo | uint16_t(u8()) << 8);
    }
};

void append_le16(Bytes& out, uint16_t v) {
    out.push_back(uint8_t(v));
    out.push_back(uint8_t(v >> 8));
}

}  // namespace

std::vector<Pubkey> Transaction::signer_set() const {
    std::vector<Pubkey> out{fee_payer};
    for (const TxAccount& a : accounts)
        if (a.signer && std::find(out.begin(), out.end(), a.pubkey) == out.end())
            out.push_back(a.pubkey);
    return out;
}

bool Transaction::is_signed_by(const Pubkey& k) const {
    if (k == fee_payer) return true;
    return std::any_of(accounts.begin(), accounts.end(),
                       [&](const TxAccount& a) { return a.signer && a.pubkey == k; });
}

Instruction Transaction::to_instruction(const Pubkey& program_id) const {
    std::vector<Pubkey> signers = signer_set();
    auto signs = [&](const Pubkey& k) {
        return std::find(signers.begin(), signers.end(), k) != signers.end();
    };
    Instruction instr;
    instr.program_id = program_id;
    instr.data = instr_data;
    for (const TxAccount& a : accounts)
        instr.account_metas.push_back({a.pubkey, signs(a.pubkey), a.writable});
    return instr;
}

Transaction decode_transaction(const Bytes& raw, const LedgerSnapshot& snap,
                               const LedgerConfig& cfg) {
    std::vector<Pubkey> keys = snap.selectable_keys();
    if (keys.empty()) throw ConfigError("decode_transaction: no selectable keys");
    size_t max_count = std::min<size_t>(keys.size(), MAX_INSTRUCTION_ACCOUNTS);

    ByteReader r{raw};
    Transaction tx;
    size_t count = 1 + r.u8() % max_count;
    tx.fee_payer = (r.u8() & 1) ? cfg.attacker_wallet : cfg.user_wallet;
    for (size_t i = 0; i < count; i++) {
        const Pubkey& key = keys[r.u16() % keys.size()];
        uint8_t flags = r.u8();
        bool wallet = key == cfg.user_wallet || key == cfg.attacker_wallet;
        tx.accounts.push_back({key, (flags & 1) != 0, wallet && (flags & 2) != 0});
    }
    size_t data_len = r.u16() % (MAX_INSTRUCTION_DATA + 1);
    tx.instr_data.resize(data_len);
    for (size_t i = 0; i < data_len; i++) tx.instr_data[i] = r.u8();
    return tx;
}

Bytes encode_transaction(const Transaction& tx, const LedgerSnapshot& snap,
                         const LedgerConfig& cfg) {
    std::vector<Pubkey> keys = snap.selectable_keys();
    size_t max_count = std::min<size_t>(keys.size(), MAX_INSTRUCTION_ACCOUNTS);
    if (tx.accounts.empty() || tx.accounts.size() > max_count)
        throw ConfigError("encode_transaction: account count out of range");

    Bytes out;
    out.push_back(uint8_t(tx.accounts.size() - 1));
    out.push_back(tx.fee_payer == cfg.attacker_wallet ? 1 : 0);
    for (const TxAccount& a : tx.accounts) {
        auto it = std::find(keys.begin(), keys.end(), a.pubkey);
        if (it == keys.end()) throw ConfigError("encode_transaction: key not selectable");
        append_le16(out, uint16_t(it - keys.begin()));
        out.push_back(uint8_t(a.writable) | uint8_t(a.signer) << 1);
    }
    if (tx.instr_data.size() > MAX_INSTRUCTION_DATA)
        throw ConfigError("encode_transaction: instruction data too long");
    append_le16(out, uint16_t(tx.instr_data.size()));
    out.insert(out.end(), tx.instr_data.begin(), tx.instr_data.end());
    return out;
}

}  // namespace solfuzz
