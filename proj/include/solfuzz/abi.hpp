// Bit-exact serialization of an instruction plus resolved accounts into the
// VM input region, the address->field map consumed by taint and oracles, and
// the write-back that reflects VM memory writes into account state.
//
// Wire layout (all integers little-endian):
//   u64 account_count
//   per account, first occurrence:
//     u8 dup_marker = 0xFF, u8 is_signer, u8 is_writable, u8 executable,
//     4 zero bytes, pubkey[32], owner[32], u64 lamports, u64 data_len,
//     data bytes, zero padding to 8-byte alignment, u64 rent_epoch
//   per account, repeat occurrence:
//     u8 dup_marker = index of first occurrence, 7 zero bytes
//   u64 instr_data_len, instr data (unpadded), program_id[32]
#pragma once

#include <optional>

#include "solfuzz/ledger.hpp"
#include "solfuzz/vm.hpp"  // ErrorReason, MM_INPUT_START

namespace solfuzz {

constexpr size_t MAX_INSTRUCTION_ACCOUNTS = 16;
constexpr size_t MAX_INSTRUCTION_DATA = 1024;

struct AccountMeta {
    Pubkey pubkey{};
    bool is_signer = false;
    bool is_writable = false;

    bool operator==(const AccountMeta&) const = default;
};

struct Instruction {
    Pubkey program_id{};
    std::vector<AccountMeta> account_metas;  // <= 16
    Bytes data;                              // <= 1024 bytes

    bool operator==(const Instruction&) const = default;
};

enum class FieldKind {
    Meta,      // dup marker + flags (dup entries classify here too)
    Pubkey,
    Owner,
    Lamports,
    DataLen,
    Data,
    RentEpoch,
    InstructionData,
    ProgramId,
};

struct FieldRef {
    int account = -1;  // -1 for InstructionData / ProgramId
    FieldKind kind = FieldKind::Meta;
    uint64_t offset = 0;  // within the field

    bool operator==(const FieldRef&) const = default;
};

struct AccountRange {
    Pubkey pubkey{};
    bool dup = false;
    uint32_t dup_of = 0;
    bool is_signer = false;
    bool is_writable = false;
    uint64_t entry_start = 0;  // offset of the dup-marker byte
    uint64_t entry_end = 0;
    // absolute blob offsets, meaningful when !dup
    uint64_t meta = 0, pubkey_off = 0, owner = 0, lamports = 0;
    uint64_t data_len = 0, data = 0, rent_epoch = 0;
    uint64_t data_size = 0;
};

struct InputLayoutMap {
    std::vector<AccountRange> accounts;
    uint64_t instr_len_off = 0;
    uint64_t instr_data_off = 0;
    uint64_t instr_data_size = 0;
    uint64_t program_id_off = 0;
    uint64_t total_size = 0;

    // blob-relative; nullopt for count field, alignment padding, and
    // out-of-range offsets
    std::optional<FieldRef> locate(uint64_t offset) const;
    // VM-address flavor (input region starts at MM_INPUT_START)
    std::optional<FieldRef> locate_addr(uint64_t vm_addr) const;
};

// Every meta pubkey must resolve in the snapshot.
std::pair<Bytes, InputLayoutMap> serialize(const Instruction& instr,
                                           const LedgerSnapshot& snap);

// Parsed-back account fields, for round-trip checks and report detail.
struct DeserializedAccount {
    Pubkey pubkey{};
    Pubkey owner{};
    bool is_signer = false, is_writable = false, executable = false;
    uint64_t lamports = 0, rent_epoch = 0;
    Bytes data;
    bool dup = false;
    uint32_t dup_of = 0;
};
std::vector<DeserializedAccount> deserialize_accounts(const Bytes& blob,
                                                      const InputLayoutMap& layout);

// Applies lamports/data of writable, non-dup accounts from `current` to the
// working snapshot. `baseline` is the blob as last synchronized with the
// snapshot; a difference outside the writable ranges is a violation.
// Returns nullopt on success, WriteViolation or Imbalanced on failure
// (working may be partially updated on failure; callers discard it).
std::optional<ErrorReason> writeback(const Bytes& baseline, const Bytes& current,
                                     const InputLayoutMap& layout, LedgerSnapshot& working);

}  // namespace solfuzz
