#include "solfuzz/campaign.hpp"

#include <algorithm>

namespace solfuzz {

Campaign::Campaign(Ledger ledger, CampaignConfig cfg)
    : ledger_(std::move(ledger)),
      cfg_(std::move(cfg)),
      oracles_(cfg_.oracles),
      coverage_(cfg_.coverage_size),
      executor_(&ledger_, &oracles_, &coverage_, cfg_.executor),
      rng_(cfg_.seed),
      start_(std::chrono::steady_clock::now()) {
    seed_corpus();
}

void Campaign::seed_corpus() {
    const LedgerConfig& lc = ledger_.config();
    const LedgerSnapshot& snap = ledger_.snapshot();
    auto add = [&](const Transaction& tx) {
        Bytes wire = encode_transaction(tx, snap, lc);
        admitted_.insert(wire);
        corpus_.push_back({std::move(wire), 4});
    };

    // user-signed write touching the primary data account
    Transaction a;
    a.fee_payer = lc.user_wallet;
    a.accounts = {{ascii_key("user-data-0"), true, false},
                  {lc.user_wallet, true, true},
                  {lc.attacker_wallet, true, false}};
    a.instr_data = Bytes(8, 0);
    add(a);

    // the attacker driving the same accounts with saturated data
    Transaction b;
    b.fee_payer = lc.attacker_wallet;
    b.accounts = {{ascii_key("user-data-0"), true, false},
                  {lc.attacker_wallet, true, true},
                  {lc.user_wallet, true, false}};
    b.instr_data = Bytes(8, 0xff);
    add(b);

    // a wide account fan including the sysvars
    Transaction c;
    c.fee_payer = lc.user_wallet;
    c.accounts = {{ascii_key("user-data-0"), true, false},
                  {ascii_key("user-data-1"), true, false},
                  {lc.sysvar_clock, false, false},
                  {lc.sysvar_instructions, false, false},
                  {lc.user_wallet, true, true}};
    c.instr_data = Bytes{1, 2, 3, 4};
    add(c);

    stats_.corpus_size = corpus_.size();
}

bool Campaign::exhausted() const {
    if (halted_) return true;
    if (cfg_.max_execs && stats_.executions >= cfg_.max_execs) return true;
    if (cfg_.time_budget_secs > 0) {
        std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
        if (dt.count() >= cfg_.time_budget_secs) return true;
    }
    return false;
}

void Campaign::execute_child(const Bytes& wire) {
    Transaction tx = decode_transaction(wire, ledger_.snapshot(), ledger_.config());
    ExecutionResult result = executor_.execute(tx);
    stats_.executions++;
    uint64_t novelty = coverage_.finish_execution();

    switch (result.outcome.kind) {
        case OutcomeKind::Success: stats_.successes++; break;
        case OutcomeKind::ProgramError: stats_.program_errors++; break;
        case OutcomeKind::Aborted: stats_.aborts++; break;
        case OutcomeKind::OracleSignal: break;  // counted via signals below
    }

    if (result.signal) {
        stats_.signals++;
        const OracleSignalInfo& sig = *result.signal;
        if (reported_.insert({sig.kind, sig.pc}).second) {
            // embed the state the execution started from, for exact replay
            Report rep;
            rep.kind = sig.kind;
            rep.pc = sig.pc;
            rep.detail = sig.detail;
            rep.escalation = sig.escalation;
            rep.exec_index = stats_.executions;
            rep.tx_wire = encode_transaction(tx, ledger_.snapshot(), ledger_.config());
            rep.program = ledger_.program_bytes();
            rep.snapshot_json = snapshot_to_json(ledger_.snapshot(), ledger_.semantics());
            rep.oracles = cfg_.oracles;
            reports_.push_back(rep);
            if (cfg_.on_report) cfg_.on_report(reports_.back());
            if (cfg_.halt_kinds.count(sig.kind)) halted_ = true;
        }
    }

    // Ledger evolution. Absorbing new semantics rebuilds the base snapshot
    // (dropping committed effects), so a grown ledger skips this commit: the
    // working state was derived from the superseded snapshot.
    bool grew = false;
    if (!result.structures.empty() || !result.layouts.empty()) {
        grew = ledger_.absorb_semantics(result.structures, result.layouts);
        if (grew) stats_.semantics_growths++;
    }
    if (!grew && result.outcome.kind == OutcomeKind::Success)
        ledger_.commit(std::move(result.working));

    // new edges admit the canonical form of this transaction
    if (novelty > 0) {
        Bytes canon = encode_transaction(tx, ledger_.snapshot(), ledger_.config());
        if (admitted_.insert(canon).second) {
            corpus_.push_back({std::move(canon), novelty});
            stats_.corpus_size = corpus_.size();
        }
    }
    stats_.edges_seen = coverage_.seen_count();
}

bool Campaign::step() {
    if (exhausted()) return false;
    // weighted round-robin: novel parents get longer bursts
    Entry parent = corpus_[cursor_ % corpus_.size()];  // copy: admissions reallocate
    cursor_++;
    uint64_t burst = 1 + std::min<uint64_t>(parent.novelty, 15);
    for (uint64_t i = 0; i < burst && !exhausted(); i++) {
        if (corpus_.size() >= 2 && rng_() % 8 == 0) {
            const Bytes& other = corpus_[rng_() % corpus_.size()].wire;
            execute_child(crossover(parent.wire, other, rng_));
        } else {
            execute_child(mutate_once(parent.wire, rng_));
        }
    }
    return !exhausted();
}

void Campaign::run() {
    while (step()) {
    }
}

}  // namespace solfuzz
