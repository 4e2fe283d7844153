#include "solfuzz/ledger.hpp"

#include <algorithm>

#include "solfuzz/pda.hpp"
#include "solfuzz/sha256.hpp"

namespace solfuzz {

const Account* LedgerSnapshot::find(const Pubkey& k) const {
    auto it = accounts.find(k);
    return it == accounts.end() ? nullptr : &it->second;
}

Account* LedgerSnapshot::find(const Pubkey& k) {
    auto it = accounts.find(k);
    return it == accounts.end() ? nullptr : &it->second;
}

std::vector<Pubkey> LedgerSnapshot::selectable_keys() const {
    std::vector<Pubkey> out;
    for (const auto* set : {&roles.user_keys, &roles.attacker_keys, &roles.sysvar_keys,
                            &roles.program_keys, &roles.user_pda_keys, &roles.attacker_pda_keys,
                            &roles.attacker_controlled_keys})
        out.insert(out.end(), set->begin(), set->end());
    return out;
}

RoleKind LedgerSnapshot::role_of(const Pubkey& k) const {
    auto in = [&](const std::vector<Pubkey>& v) {
        return std::find(v.begin(), v.end(), k) != v.end();
    };
    if (in(roles.user_keys)) return RoleKind::User;
    if (in(roles.attacker_keys)) return RoleKind::Attacker;
    if (in(roles.sysvar_keys)) return RoleKind::Sysvar;
    if (in(roles.program_keys)) return RoleKind::Program;
    if (in(roles.user_pda_keys)) return RoleKind::UserPda;
    if (in(roles.attacker_pda_keys)) return RoleKind::AttackerPda;
    if (in(roles.attacker_controlled_keys)) return RoleKind::AttackerControlled;
    return RoleKind::None;
}

uint64_t LedgerSnapshot::total_lamports() const {
    uint64_t sum = 0;
    for (const auto& [k, a] : accounts) sum += a.lamports;  // wrapping by design
    return sum;
}

Pubkey ascii_key(const std::string& name) {
    if (name.size() > 32) throw ConfigError("ascii_key name too long: " + name);
    Pubkey k;
    k.fill('.');
    std::copy(name.begin(), name.end(), k.begin());
    return k;
}

namespace {

Account basic(const Pubkey& key, const Pubkey& owner, uint64_t lamports, Bytes data = {},
              bool executable = false) {
    Account a;
    a.pubkey = key;
    a.owner = owner;
    a.lamports = lamports;
    a.data = std::move(data);
    a.executable = executable;
    return a;
}

void insert_account(LedgerSnapshot& snap, Account a) { snap.accounts[a.pubkey] = std::move(a); }

Bytes clock_sysvar_data() {
    // slot, epoch, unix_timestamp, leader_schedule_epoch
    const uint64_t fields[4] = {1, 1, 1700000000, 1};
    Bytes d(32);
    for (int i = 0; i < 4; i++) write_le64(d.data() + i * 8, fields[i]);
    return d;
}

}  // namespace

LedgerSnapshot build_snapshot(const LedgerConfig& cfg, const Bytes& target_program_bytes) {
    LedgerSnapshot snap;
    auto& r = snap.roles;

    insert_account(snap, basic(cfg.user_wallet, cfg.system_program, cfg.wallet_lamports));
    r.user_keys.push_back(cfg.user_wallet);
    for (uint32_t i = 0; i < cfg.extra_data_accounts; i++) {
        Pubkey k = ascii_key("user-data-" + std::to_string(i));
        insert_account(snap, basic(k, cfg.target_program, cfg.pda_lamports,
                                   Bytes(cfg.data_account_size, 0)));
        r.user_keys.push_back(k);
    }
    insert_account(snap, basic(cfg.attacker_wallet, cfg.system_program, cfg.wallet_lamports));
    r.attacker_keys.push_back(cfg.attacker_wallet);

    insert_account(snap, basic(cfg.sysvar_clock, cfg.system_program, cfg.pda_lamports,
                               clock_sysvar_data()));
    insert_account(snap, basic(cfg.sysvar_instructions, cfg.system_program, cfg.pda_lamports));
    r.sysvar_keys = {cfg.sysvar_clock, cfg.sysvar_instructions};

    insert_account(snap, basic(cfg.target_program, cfg.loader_program, cfg.pda_lamports,
                               target_program_bytes, true));
    insert_account(snap, basic(cfg.system_program, cfg.loader_program, cfg.pda_lamports, {}, true));
    insert_account(snap, basic(cfg.loader_program, cfg.loader_program, cfg.pda_lamports, {}, true));
    insert_account(snap, basic(cfg.malicious_program, cfg.loader_program, cfg.pda_lamports, {}, true));
    insert_account(snap, basic(cfg.aux_program, cfg.loader_program, cfg.pda_lamports, {}, true));
    r.program_keys = {cfg.target_program, cfg.system_program, cfg.loader_program,
                      cfg.malicious_program, cfg.aux_program};
    return snap;
}

namespace {

void add_pda(LedgerSnapshot& snap, std::vector<Pubkey>& role_list,
             const std::vector<Bytes>& seeds, const LedgerConfig& cfg) {
    auto found = pda_try_find(seeds, cfg.target_program);
    if (!found) return;  // exhausted bump space: no account
    const Pubkey& key = found->first;
    if (snap.accounts.count(key)) return;  // idempotent
    insert_account(snap, basic(key, cfg.target_program, cfg.pda_lamports,
                               Bytes(cfg.data_account_size, 0)));
    role_list.push_back(key);
}

}  // namespace

void generate_pdas(LedgerSnapshot& snap, const std::vector<SeedStructure>& structures,
                   const LedgerConfig& cfg) {
    for (const SeedStructure& st : structures) {
        bool has_pubkey = std::any_of(st.elements.begin(), st.elements.end(),
                                      [](const SeedElement& e) { return e.from_pubkey; });
        auto seeds_with = [&](const Pubkey& substitute) {
            std::vector<Bytes> seeds;
            for (const SeedElement& e : st.elements) {
                if (e.from_pubkey)
                    seeds.emplace_back(substitute.begin(), substitute.end());
                else
                    seeds.push_back(e.bytes);
            }
            return seeds;
        };
        if (has_pubkey) {
            add_pda(snap, snap.roles.user_pda_keys, seeds_with(cfg.user_wallet), cfg);
            add_pda(snap, snap.roles.attacker_pda_keys, seeds_with(cfg.attacker_wallet), cfg);
        } else {
            add_pda(snap, snap.roles.user_pda_keys, seeds_with(Pubkey{}), cfg);
        }
    }
}

void generate_attacker_controlled(LedgerSnapshot& snap,
                                  const std::vector<AccountDataLayout>& layouts,
                                  const LedgerConfig& cfg) {
    for (const AccountDataLayout& ly : layouts) {
        if (ly.pubkey_offsets.size() < 2) continue;
        // fill keys for the non-attacker slots: program-managed victims with
        // balances worth stealing
        std::vector<Pubkey> fills = snap.roles.user_pda_keys;
        for (const Pubkey& k : snap.roles.user_keys)
            if (k != cfg.user_wallet) fills.push_back(k);  // extra data accounts
        fills.push_back(cfg.user_wallet);
        // one account per (attacker slot, fill rotation), capped at 8
        size_t variants = std::min<size_t>(8, ly.pubkey_offsets.size() * fills.size());
        for (size_t v = 0; v < variants; v++) {
            size_t attacker_slot = v % ly.pubkey_offsets.size();
            size_t fill_base = v / ly.pubkey_offsets.size();
            Bytes key_material;
            append_le64(key_material, ly.id);
            append_le64(key_material, v);
            Pubkey key = sha256_concat({{'a', 'c', 'c', 't'}, key_material});
            if (snap.accounts.count(key)) continue;  // idempotent

            Bytes data(ly.data_len, 0);
            for (size_t s = 0; s < ly.pubkey_offsets.size(); s++) {
                uint32_t off = ly.pubkey_offsets[s];
                const Pubkey& planted = s == attacker_slot
                                            ? cfg.attacker_wallet
                                            : fills[(fill_base + s) % fills.size()];
                std::copy(planted.begin(), planted.end(), data.begin() + off);
            }
            insert_account(snap, basic(key, cfg.attacker_wallet, cfg.pda_lamports,
                                       std::move(data)));
            snap.roles.attacker_controlled_keys.push_back(key);
        }
    }
}

Ledger::Ledger(LedgerConfig cfg, Bytes target_program_bytes)
    : cfg_(std::move(cfg)), program_bytes_(std::move(target_program_bytes)) {
    snapshot_ = build_snapshot(cfg_, program_bytes_);
    refresh_blockhash();
}

void Ledger::refresh_blockhash() {
    Bytes gen;
    append_le64(gen, snapshot_.generation);
    snapshot_.blockhash = sha256_concat({{'b', 'l', 'o', 'c', 'k', 'h', 'a', 's', 'h'}, gen});
}

void Ledger::commit(LedgerSnapshot working) {
    uint64_t next = snapshot_.generation + 1;
    snapshot_ = std::move(working);
    snapshot_.generation = next;
    refresh_blockhash();
}

bool Ledger::absorb_semantics(const std::vector<SeedStructure>& s,
                              const std::vector<AccountDataLayout>& l) {
    if (!semantics_.absorb(s, l)) return false;
    // pure rebuild from (config, program, accumulated registry); committed
    // transaction effects are intentionally dropped
    uint64_t next = snapshot_.generation + 1;
    snapshot_ = build_snapshot(cfg_, program_bytes_);
    generate_pdas(snapshot_, semantics_.structures, cfg_);
    generate_attacker_controlled(snapshot_, semantics_.layouts, cfg_);
    snapshot_.generation = next;
    refresh_blockhash();
    return true;
}

void Ledger::restore(LedgerSnapshot snap, SemanticsRegistry semantics) {
    snapshot_ = std::move(snap);
    semantics_ = std::move(semantics);
}

}  // namespace solfuzz
