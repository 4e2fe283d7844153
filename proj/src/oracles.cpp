#include "solfuzz/oracles.hpp"

#include <algorithm>
#include <sstream>

#include "solfuzz/base58.hpp"

namespace solfuzz {

const char* report_kind_name(ReportKind k) {
    switch (k) {
        case ReportKind::MissingSignerCheck: return "missing_signer_check";
        case ReportKind::MissingOwnerCheck: return "missing_owner_check";
        case ReportKind::IntegerBug: return "integer_bug";
        case ReportKind::ArbitraryCpi: return "arbitrary_cpi";
        case ReportKind::MissingKeyCheck: return "missing_key_check";
        case ReportKind::LamportsTheft: return "lamports_theft";
    }
    return "unknown";
}

std::optional<ReportKind> report_kind_from_name(const std::string& s) {
    for (ReportKind k :
         {ReportKind::MissingSignerCheck, ReportKind::MissingOwnerCheck, ReportKind::IntegerBug,
          ReportKind::ArbitraryCpi, ReportKind::MissingKeyCheck, ReportKind::LamportsTheft})
        if (s == report_kind_name(k)) return k;
    return std::nullopt;
}

OracleConfig OracleConfig::from_csv(const std::string& csv) {
    OracleConfig cfg;
    if (csv.empty() || csv == "all") {
        cfg.mkc = true;  // still needs an authority key to do anything
        return cfg;
    }
    cfg.msc = cfg.moc = cfg.ib = cfg.acpi = cfg.lamports = cfg.mkc = false;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "msc") cfg.msc = true;
        else if (tok == "moc") cfg.moc = true;
        else if (tok == "ib") cfg.ib = true;
        else if (tok == "acpi") cfg.acpi = true;
        else if (tok == "mkc") cfg.mkc = true;
        else if (tok == "lamports") cfg.lamports = true;
        else throw ConfigError("unknown oracle '" + tok + "' (msc,moc,ib,acpi,mkc,lamports)");
    }
    return cfg;
}

void Oracles::begin_execution(std::vector<Pubkey> signer_set, const Roles& roles) {
    signers_ = std::move(signer_set);
    roles_ = roles;
    signal_.reset();
    msc_candidates_.clear();
    msc_trusted_.clear();
    moc_foreign_.clear();
    moc_vulnerable_.clear();
    mkc_checked_.clear();
}

bool Oracles::is_signed(const Pubkey& k) const {
    return std::find(signers_.begin(), signers_.end(), k) != signers_.end();
}

void Oracles::raise(ReportKind kind, uint64_t pc, std::string detail, bool escalation) {
    if (signal_) return;
    signal_ = OracleSignalInfo{kind, pc, std::move(detail), escalation};
}

void Oracles::fact(const ComparisonFact& f, const std::vector<OracleAccount>& accts) {
    if (signal_ || f.kind != ComparisonFact::Kind::DataVsPubkey) return;
    if (f.data_account < 0 || size_t(f.data_account) >= accts.size()) return;
    if (f.pubkey_account < 0 || size_t(f.pubkey_account) >= accts.size()) return;
    const Pubkey& a = accts[f.data_account].pubkey;  // data side
    const Pubkey& b = accts[f.pubkey_account].pubkey;

    if (cfg_.msc) {
        // An unsigned identity comparison marks both accounts as candidate
        // victims of the data account's gate; a signed one (or a comparison
        // involving an already-trusted data account) vouches for everything
        // the gate accumulated.
        if (!is_signed(a) && !is_signed(b) && !msc_trusted_.count(a)) {
            msc_candidates_[a].insert(a);
            msc_candidates_[a].insert(b);
        } else {
            msc_trusted_.insert(a);
            msc_trusted_.insert(b);
            auto it = msc_candidates_.find(a);
            if (it != msc_candidates_.end()) {
                msc_trusted_.insert(it->second.begin(), it->second.end());
                msc_candidates_.erase(it);
            }
        }
    }
    if (cfg_.moc && moc_foreign_.count(a)) moc_vulnerable_.insert(b);
}

void Oracles::armed_key_compare(const TaintCompare& cmp, const std::vector<OracleAccount>& accts) {
    if (signal_ || !cfg_.mkc || cfg_.mkc_authority == Pubkey{}) return;
    auto scan = [&](const LabelSet& labels, uint64_t other_val) {
        for (const TaintLabel& l : labels) {
            if (l.kind != TaintKind::AccountPubkey || l.chunk >= 4) continue;
            if (l.account < 0 || size_t(l.account) >= accts.size()) continue;
            if (other_val == read_le64(cfg_.mkc_authority.data() + 8 * l.chunk))
                mkc_checked_.insert(accts[l.account].pubkey);
        }
    };
    scan(cmp.lhs_labels, cmp.rhs_val);
    scan(cmp.rhs_labels, cmp.lhs_val);
}

void Oracles::data_read(const Pubkey& acct, const Pubkey& owner, const Pubkey& program_id) {
    if (signal_ || !cfg_.moc) return;
    if (owner != program_id) moc_foreign_.insert(acct);
}

void Oracles::lamports_write(uint64_t pc, const Pubkey& acct, uint64_t old_val, uint64_t new_val,
                             const LabelSet& src_labels) {
    if (signal_) return;
    if (cfg_.msc && !msc_trusted_.count(acct)) {
        for (const auto& [gate, victims] : msc_candidates_)
            if (victims.count(acct)) {
                raise(ReportKind::MissingSignerCheck, pc,
                      "lamports write to " + base58_encode(acct) +
                          " guarded only by an unsigned identity comparison");
                return;
            }
    }
    if (cfg_.moc && new_val < old_val && moc_vulnerable_.count(acct)) {
        raise(ReportKind::MissingOwnerCheck, pc,
              "lamports decrease on " + base58_encode(acct) +
                  " vouched for by unverified foreign account data");
        return;
    }
    if (cfg_.ib && has_kind(src_labels, TaintKind::Overflowed)) {
        raise(ReportKind::IntegerBug, pc,
              "wrapped arithmetic result stored into lamports of " + base58_encode(acct));
        return;
    }
    (void)old_val;
}

void Oracles::data_write(uint64_t pc, const Pubkey& acct, const LabelSet&) {
    if (signal_) return;
    if (cfg_.msc && !msc_trusted_.count(acct)) {
        for (const auto& [gate, victims] : msc_candidates_)
            if (victims.count(acct)) {
                raise(ReportKind::MissingSignerCheck, pc,
                      "data write to " + base58_encode(acct) +
                          " guarded only by an unsigned identity comparison");
                return;
            }
    }
    if (cfg_.moc && moc_vulnerable_.count(acct)) {
        raise(ReportKind::MissingOwnerCheck, pc,
              "data write to " + base58_encode(acct) +
                  " vouched for by unverified foreign account data");
    }
}

void Oracles::cpi(uint64_t pc, const CpiRequest& req) {
    if (signal_ || !cfg_.acpi) return;
    if (cfg_.malicious_program != Pubkey{} && req.target == cfg_.malicious_program)
        raise(ReportKind::ArbitraryCpi, pc,
              "cross-program invoke reached the planted program " + base58_encode(req.target),
              !req.signer_pdas.empty());
}

void Oracles::add_signers(const std::vector<Pubkey>& keys) {
    for (const Pubkey& k : keys)
        if (!is_signed(k)) signers_.push_back(k);
}

void Oracles::local_call(uint64_t pc, uint64_t target_pc,
                         std::optional<Pubkey> first_arg_account) {
    if (signal_ || !cfg_.mkc || cfg_.mkc_authority == Pubkey{}) return;
    if (target_pc != cfg_.mkc_function_pc || !first_arg_account) return;
    if (!mkc_checked_.count(*first_arg_account))
        raise(ReportKind::MissingKeyCheck, pc,
              "guarded function called on account " + base58_encode(*first_arg_account) +
                  " whose pubkey was never compared against the authority");
}

std::optional<OracleSignalInfo> Oracles::check_lamports(const LedgerSnapshot& base,
                                                        const LedgerSnapshot& working) const {
    if (signal_ || !cfg_.lamports) return std::nullopt;
    if (roles_.attacker_keys.empty() || roles_.user_keys.empty()) return std::nullopt;
    const Pubkey& attacker_wallet = roles_.attacker_keys[0];
    const Pubkey& user_wallet = roles_.user_keys[0];
    if (!is_signed(attacker_wallet) || is_signed(user_wallet)) return std::nullopt;

    auto sum_over = [](const LedgerSnapshot& snap, const std::vector<Pubkey>& keys) {
        uint64_t total = 0;
        for (const Pubkey& k : keys)
            if (const Account* a = snap.find(k)) total += a->lamports;
        return total;
    };
    std::vector<Pubkey> user_side{user_wallet};
    user_side.insert(user_side.end(), roles_.user_pda_keys.begin(), roles_.user_pda_keys.end());
    std::vector<Pubkey> attacker_side{attacker_wallet};
    attacker_side.insert(attacker_side.end(), roles_.attacker_pda_keys.begin(),
                         roles_.attacker_pda_keys.end());

    uint64_t user_before = sum_over(base, user_side), user_after = sum_over(working, user_side);
    uint64_t att_before = sum_over(base, attacker_side),
             att_after = sum_over(working, attacker_side);
    if (user_after < user_before && att_after > att_before) {
        OracleSignalInfo info;
        info.kind = ReportKind::LamportsTheft;
        info.pc = 0;
        info.detail = "attacker-signed transaction moved " +
                      std::to_string(user_before - user_after) +
                      " lamports out of user accounts while attacker accounts gained " +
                      std::to_string(att_after - att_before);
        return info;
    }
    return std::nullopt;
}

// --- adapter ---

void OracleVmAdapter::compare(const TaintCompare& cmp) {
    for (const ComparisonFact& f : extract_facts(cmp)) oracles_->fact(f, accounts_);
    if (top_level_) oracles_->armed_key_compare(cmp, accounts_);
}

void OracleVmAdapter::on_mem_read(const Vm&, uint64_t, uint64_t addr, int, int) {
    auto ref = layout_->locate_addr(addr);
    if (!ref || ref->account < 0 || ref->kind != FieldKind::Data) return;
    const OracleAccount& a = accounts_[ref->account];
    oracles_->data_read(a.pubkey, a.owner, program_id_);
}

void OracleVmAdapter::on_mem_write(const Vm& vm, uint64_t pc, uint64_t addr, int width,
                                   const uint8_t* old_bytes, const uint8_t*, int src_reg) {
    auto ref = layout_->locate_addr(addr);
    if (!ref || ref->account < 0) return;
    const OracleAccount& acct = accounts_[ref->account];
    LabelSet labels;
    if (taint_ && src_reg >= 0) labels = taint_->reg_labels(src_reg);

    if (ref->kind == FieldKind::Lamports) {
        // Reconstruct the full field before/after: the write already landed,
        // so read the new value and splice the old bytes back over it.
        uint64_t field_addr = MM_INPUT_START + layout_->accounts[ref->account].lamports;
        uint64_t full_new = 0;
        if (!vm.peek_u64(field_addr, &full_new)) return;
        uint8_t buf[8];
        write_le64(buf, full_new);
        for (int i = 0; i < width && ref->offset + i < 8; i++)
            buf[ref->offset + i] = old_bytes[i];
        oracles_->lamports_write(pc, acct.pubkey, read_le64(buf), full_new, labels);
    } else if (ref->kind == FieldKind::Data) {
        oracles_->data_write(pc, acct.pubkey, labels);
    }
}

void OracleVmAdapter::on_cpi(const Vm&, uint64_t pc, const CpiRequest& req) {
    oracles_->cpi(pc, req);
    if (!oracles_->signaled()) oracles_->add_signers(req.signer_pdas);
}

void OracleVmAdapter::on_local_call(const Vm&, uint64_t pc, uint64_t target_pc,
                                    const uint64_t* args) {
    if (!top_level_) return;
    std::optional<Pubkey> arg;
    auto ref = layout_->locate_addr(args[0]);
    if (ref && ref->account >= 0) arg = accounts_[ref->account].pubkey;
    oracles_->local_call(pc, target_pc, arg);
}

}  // namespace solfuzz
