// Maps raw fuzzer bytes onto structurally valid transactions: every decoded
// transaction references existing snapshot accounts and only wallets can
// sign, so executions fail in the program, not in the plumbing. Decoding is
// total (exhausted input reads as zeros) and has a canonical re-encoding for
// replay files.
#pragma once

#include "solfuzz/abi.hpp"
#include "solfuzz/ledger.hpp"

namespace solfuzz {

struct TxAccount {
    Pubkey pubkey{};
    bool writable = false;
    bool signer = false;

    bool operator==(const TxAccount&) const = default;
};

struct Transaction {
    Pubkey fee_payer{};  // always a wallet
    std::vector<TxAccount> accounts;
    Bytes instr_data;

    // fee payer plus every account flagged as signer, deduplicated
    std::vector<Pubkey> signer_set() const;
    bool is_signed_by(const Pubkey& k) const;
    // Metas carry is_signer by signer-set membership.
    Instruction to_instruction(const Pubkey& program_id) const;

    bool operator==(const Transaction&) const = default;
};

// Wire format of the fuzzed representation:
//   u8 count_sel: account count = 1 + count_sel % min(|selectable|, 16)
//   u8 payer_sel: bit0 set -> attacker wallet pays, else user wallet
//   per account: u16 key index (mod |selectable|), u8 flags
//     flags bit0 = writable; bit1 = signer, honored only for wallet keys
//   u16 data_sel: instruction data length = data_sel % 1025, then that many
//     data bytes
// Reads past the end of `raw` yield zero bytes.
Transaction decode_transaction(const Bytes& raw, const LedgerSnapshot& snap,
                               const LedgerConfig& cfg);

// Canonical bytes that decode back to exactly `tx` against the same
// snapshot. Every account pubkey must be selectable.
Bytes encode_transaction(const Transaction& tx, const LedgerSnapshot& snap,
                         const LedgerConfig& cfg);

}  // namespace solfuzz
