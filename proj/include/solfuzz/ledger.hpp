// Blockchain emulator: canonical snapshot of accounts and roles, PDA and
// attacker-controlled account generation from recovered semantics, working
// copies for per-execution isolation.
#pragma once

#include <map>
#include <optional>

#include "solfuzz/common.hpp"
#include "solfuzz/extractors.hpp"

namespace solfuzz {

constexpr uint64_t LAMPORTS_PER_SOL = 1'000'000'000ull;

struct Account {
    Pubkey pubkey{};
    Pubkey owner{};
    bool executable = false;
    uint64_t rent_epoch = 0;
    uint64_t lamports = 0;
    Bytes data;

    bool operator==(const Account&) const = default;
};

struct Roles {
    std::vector<Pubkey> user_keys;      // wallet first, then extra data accounts
    std::vector<Pubkey> attacker_keys;  // wallet
    std::vector<Pubkey> sysvar_keys;
    std::vector<Pubkey> program_keys;
    std::vector<Pubkey> user_pda_keys;
    std::vector<Pubkey> attacker_pda_keys;
    std::vector<Pubkey> attacker_controlled_keys;

    bool operator==(const Roles&) const = default;
};

struct LedgerSnapshot {
    std::map<Pubkey, Account> accounts;
    Roles roles;
    Pubkey blockhash{};
    uint64_t generation = 0;

    const Account* find(const Pubkey& k) const;
    Account* find(const Pubkey& k);
    // Concatenation of role key lists in declaration order; the transaction
    // generator indexes into this (append-only within a campaign).
    std::vector<Pubkey> selectable_keys() const;
    RoleKind role_of(const Pubkey& k) const;
    uint64_t total_lamports() const;  // wrapping sum

    bool operator==(const LedgerSnapshot&) const = default;
};

// 32-byte key from a short ASCII name, '.'-padded: keys stay greppable in
// dumps and fixed across runs.
Pubkey ascii_key(const std::string& name);

struct LedgerConfig {
    uint64_t wallet_lamports = 10 * LAMPORTS_PER_SOL;
    uint64_t pda_lamports = LAMPORTS_PER_SOL;
    uint32_t extra_data_accounts = 2;
    uint32_t data_account_size = 128;
    Pubkey user_wallet = ascii_key("user-wallet");
    Pubkey attacker_wallet = ascii_key("attacker-wallet");
    Pubkey sysvar_clock = ascii_key("sysvar-clock");
    Pubkey sysvar_instructions = ascii_key("sysvar-instructions");
    Pubkey target_program = ascii_key("target-program");
    Pubkey system_program = ascii_key("system-program");
    Pubkey loader_program = ascii_key("loader-program");
    Pubkey malicious_program = ascii_key("malicious-program");
    Pubkey aux_program = ascii_key("aux-program");
};

LedgerSnapshot build_snapshot(const LedgerConfig& cfg, const Bytes& target_program_bytes);
// One user-related and one attacker-related PDA per pubkey-bearing structure
// (wallet key substituted at the pubkey seed positions); a single PDA for
// static-only structures. Idempotent.
void generate_pdas(LedgerSnapshot& snap, const std::vector<SeedStructure>& structures,
                   const LedgerConfig& cfg);
// Accounts not owned by the program whose data plants the attacker key in one
// pubkey slot and user-related keys in the others; layouts with fewer than
// two pubkey offsets are skipped. At most 8 accounts per layout. Idempotent.
void generate_attacker_controlled(LedgerSnapshot& snap,
                                  const std::vector<AccountDataLayout>& layouts,
                                  const LedgerConfig& cfg);

// Owns the canonical snapshot plus the accumulated semantics registry and
// rebuilds deterministically when new semantics arrive.
class Ledger {
  public:
    Ledger(LedgerConfig cfg, Bytes target_program_bytes);

    const LedgerSnapshot& snapshot() const { return snapshot_; }
    const LedgerConfig& config() const { return cfg_; }
    const Bytes& program_bytes() const { return program_bytes_; }
    const SemanticsRegistry& semantics() const { return semantics_; }

    LedgerSnapshot working_copy() const { return snapshot_; }
    // Publish a successfully executed working copy.
    void commit(LedgerSnapshot working);
    // Feed extraction results; regenerates (pure rebuild from config +
    // program + accumulated registry) when anything new arrived.
    bool absorb_semantics(const std::vector<SeedStructure>& s,
                          const std::vector<AccountDataLayout>& l);
    // Replay path: adopt an exported snapshot and registry verbatim.
    void restore(LedgerSnapshot snap, SemanticsRegistry semantics);

  private:
    void refresh_blockhash();

    LedgerConfig cfg_;
    Bytes program_bytes_;
    SemanticsRegistry semantics_;
    LedgerSnapshot snapshot_;
};

// JSON import/export (bit-exact for replay): accounts keyed by base58 pubkey,
// data as hex, roles object, semantics registry.
std::string snapshot_to_json(const LedgerSnapshot& snap, const SemanticsRegistry& semantics);
std::pair<LedgerSnapshot, SemanticsRegistry> snapshot_from_json(const std::string& text);

}  // namespace solfuzz
