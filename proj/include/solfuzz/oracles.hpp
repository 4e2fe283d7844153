// Vulnerability oracles over taint facts and VM events. One Oracles object
// holds the per-execution detection state, shared by the top-level VM and
// every CPI callee; a per-VM adapter resolves addresses and account indices
// to pubkeys through that VM's input layout and forwards semantic events.
// The first signal halts execution after the triggering instruction retires.
#pragma once

#include <map>
#include <optional>
#include <set>

#include "solfuzz/taint.hpp"

namespace solfuzz {

enum class ReportKind {
    MissingSignerCheck,
    MissingOwnerCheck,
    IntegerBug,
    ArbitraryCpi,
    MissingKeyCheck,
    LamportsTheft,
};
const char* report_kind_name(ReportKind k);
std::optional<ReportKind> report_kind_from_name(const std::string& s);

struct OracleConfig {
    bool msc = true;
    bool moc = true;
    bool ib = true;
    bool acpi = true;
    bool lamports = true;
    bool mkc = false;  // armed only when a function and authority are given
    uint64_t mkc_function_pc = 0;
    Pubkey mkc_authority{};
    Pubkey malicious_program{};

    // "all" or a comma list of msc,moc,ib,acpi,mkc,lamports; unknown names
    // throw ConfigError. mkc still needs the function/authority to arm.
    static OracleConfig from_csv(const std::string& csv);
};

struct OracleSignalInfo {
    ReportKind kind{};
    uint64_t pc = 0;
    std::string detail;
    bool escalation = false;  // ArbitraryCpi: invoke carried PDA signatures

    bool operator==(const OracleSignalInfo&) const = default;
};

// One instruction account as the oracles see it: identity plus the fields
// checks depend on, frozen at serialization time.
struct OracleAccount {
    Pubkey pubkey{};
    Pubkey owner{};
    bool is_writable = false;
};

class Oracles {
  public:
    explicit Oracles(OracleConfig cfg) : cfg_(std::move(cfg)) {}

    const OracleConfig& config() const { return cfg_; }

    // Resets detection state for a fresh transaction execution.
    void begin_execution(std::vector<Pubkey> signer_set, const Roles& roles);
    bool signaled() const { return signal_.has_value(); }
    const std::optional<OracleSignalInfo>& signal() const { return signal_; }

    // --- events, pubkey-resolved by the adapter ---
    void fact(const ComparisonFact& f, const std::vector<OracleAccount>& accts);
    // Raw compare with operand values; feeds the armed-key set (top VM only).
    void armed_key_compare(const TaintCompare& cmp, const std::vector<OracleAccount>& accts);
    void data_read(const Pubkey& acct, const Pubkey& owner, const Pubkey& program_id);
    void lamports_write(uint64_t pc, const Pubkey& acct, uint64_t old_val, uint64_t new_val,
                        const LabelSet& src_labels);
    void data_write(uint64_t pc, const Pubkey& acct, const LabelSet& src_labels);
    void cpi(uint64_t pc, const CpiRequest& req);
    // invoke_signed PDA grants count as consent for the rest of the execution
    void add_signers(const std::vector<Pubkey>& keys);
    void local_call(uint64_t pc, uint64_t target_pc, std::optional<Pubkey> first_arg_account);

    // Post-writeback flow check for successful executions: attacker-signed,
    // user-unsigned transactions that move lamports from the user's accounts
    // to the attacker's.
    std::optional<OracleSignalInfo> check_lamports(const LedgerSnapshot& base,
                                                   const LedgerSnapshot& working) const;

    bool is_signed(const Pubkey& k) const;

  private:
    void raise(ReportKind kind, uint64_t pc, std::string detail, bool escalation = false);

    OracleConfig cfg_;
    std::vector<Pubkey> signers_;
    Roles roles_;
    std::optional<OracleSignalInfo> signal_;

    // missing signer check: candidate victim sets per data account, trusted set
    std::map<Pubkey, std::set<Pubkey>> msc_candidates_;
    std::set<Pubkey> msc_trusted_;
    // missing owner check: foreign-data reads, accounts vouched for by them
    std::set<Pubkey> moc_foreign_;
    std::set<Pubkey> moc_vulnerable_;
    // missing key check: accounts whose pubkey was compared to the authority
    std::set<Pubkey> mkc_checked_;
};

// Per-VM hook adapter. Register it on the VM *after* the taint engine and
// point the engine's compare_sink at `compare`.
class OracleVmAdapter : public VmHooks {
  public:
    OracleVmAdapter(Oracles* oracles, TaintEngine* taint, const InputLayoutMap* layout,
                    std::vector<OracleAccount> accounts, Pubkey program_id, bool top_level)
        : oracles_(oracles),
          taint_(taint),
          layout_(layout),
          accounts_(std::move(accounts)),
          program_id_(program_id),
          top_level_(top_level) {}

    void compare(const TaintCompare& cmp);

    void on_mem_read(const Vm& vm, uint64_t pc, uint64_t addr, int width, int dst_reg) override;
    void on_mem_write(const Vm& vm, uint64_t pc, uint64_t addr, int width,
                      const uint8_t* old_bytes, const uint8_t* new_bytes, int src_reg) override;
    void on_cpi(const Vm& vm, uint64_t pc, const CpiRequest& req) override;
    void on_local_call(const Vm& vm, uint64_t pc, uint64_t target_pc,
                       const uint64_t* args) override;
    bool halt_requested() const override { return oracles_->signaled(); }

  private:
    Oracles* oracles_;
    TaintEngine* taint_;
    const InputLayoutMap* layout_;
    std::vector<OracleAccount> accounts_;
    Pubkey program_id_;
    bool top_level_;
};

}  // namespace solfuzz
