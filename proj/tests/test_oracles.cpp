#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "solfuzz/assembler.hpp"
#include "solfuzz/oracles.hpp"

using namespace solfuzz;

namespace {

Pubkey pk(uint8_t n) {
    Pubkey k{};
    k.fill(n);
    return k;
}

Roles basic_roles() {
    Roles r;
    r.user_keys = {pk(1)};
    r.attacker_keys = {pk(2)};
    r.user_pda_keys = {pk(3)};
    r.attacker_pda_keys = {pk(4)};
    return r;
}

// Four instruction accounts with distinct pubkeys, all owned by the program.
std::vector<OracleAccount> accts4(Pubkey owner = pk(0x50)) {
    std::vector<OracleAccount> v;
    for (int i = 0; i < 4; i++) v.push_back({pk(uint8_t(0x10 + i)), owner, true});
    return v;
}

ComparisonFact dvp(int data_acct, int pubkey_acct, uint64_t pc = 5) {
    ComparisonFact f;
    f.kind = ComparisonFact::Kind::DataVsPubkey;
    f.data_account = data_acct;
    f.pubkey_account = pubkey_acct;
    f.pc = pc;
    return f;
}

Oracles fresh(const std::string& csv, std::vector<Pubkey> signers = {},
              std::optional<OracleConfig> cfg = std::nullopt) {
    Oracles o(cfg ? *cfg : OracleConfig::from_csv(csv));
    o.begin_execution(std::move(signers), basic_roles());
    return o;
}

}  // namespace

TEST_CASE("oracle selection parsing") {
    OracleConfig all = OracleConfig::from_csv("all");
    CHECK(all.msc);
    CHECK(all.moc);
    CHECK(all.ib);
    CHECK(all.acpi);
    CHECK(all.lamports);
    CHECK(all.mkc);

    OracleConfig two = OracleConfig::from_csv("msc,ib");
    CHECK(two.msc);
    CHECK(two.ib);
    CHECK(!two.moc);
    CHECK(!two.acpi);
    CHECK(!two.lamports);
    CHECK(!two.mkc);

    CHECK_THROWS_AS(OracleConfig::from_csv("msc,bogus"), ConfigError);

    CHECK(report_kind_from_name("integer_bug") == ReportKind::IntegerBug);
    CHECK(report_kind_from_name(report_kind_name(ReportKind::LamportsTheft)) ==
          ReportKind::LamportsTheft);
    CHECK(!report_kind_from_name("nope").has_value());
}

TEST_CASE("missing signer check") {
    auto accts = accts4();
    SUBCASE("unsigned identity comparison then write signals") {
        auto o = fresh("msc");
        o.fact(dvp(0, 1), accts);
        o.lamports_write(7, accts[0].pubkey, 5, 5, {});
        REQUIRE(o.signaled());
        CHECK(o.signal()->kind == ReportKind::MissingSignerCheck);
        CHECK(o.signal()->pc == 7);

        // the pubkey side is a victim as well
        auto o2 = fresh("msc");
        o2.fact(dvp(0, 1), accts);
        o2.data_write(9, accts[1].pubkey, {});
        REQUIRE(o2.signaled());
        CHECK(o2.signal()->kind == ReportKind::MissingSignerCheck);
        CHECK(o2.signal()->pc == 9);
    }
    SUBCASE("write to an unrelated account does not signal") {
        auto o = fresh("msc");
        o.fact(dvp(0, 1), accts);
        o.lamports_write(7, accts[2].pubkey, 5, 5, {});
        o.data_write(8, accts[3].pubkey, {});
        CHECK(!o.signaled());
    }
    SUBCASE("signed comparison vouches for both accounts") {
        auto o = fresh("msc", {accts[1].pubkey});
        o.fact(dvp(0, 1), accts);
        o.lamports_write(7, accts[0].pubkey, 5, 5, {});
        o.data_write(8, accts[1].pubkey, {});
        CHECK(!o.signaled());
    }
    SUBCASE("a later signed gate migrates earlier candidates to trusted") {
        auto o = fresh("msc", {accts[2].pubkey});
        o.fact(dvp(0, 1), accts);  // unsigned: 0 and 1 become candidates
        o.fact(dvp(0, 2), accts);  // signed gate on the same data account
        o.lamports_write(7, accts[1].pubkey, 5, 5, {});
        o.data_write(8, accts[0].pubkey, {});
        CHECK(!o.signaled());
        // and the now-trusted data account vouches for future partners too
        o.fact(dvp(0, 3), accts);  // unsigned, but data account is trusted
        o.data_write(9, accts[3].pubkey, {});
        CHECK(!o.signaled());
    }
    SUBCASE("pubkey-vs-pubkey comparisons are not signer gates") {
        auto o = fresh("msc");
        ComparisonFact f;
        f.kind = ComparisonFact::Kind::PubkeyVsPubkey;
        f.pubkey_account = 0;
        f.other_pubkey_account = 1;
        o.fact(f, accts);
        o.lamports_write(7, accts[0].pubkey, 5, 5, {});
        CHECK(!o.signaled());
    }
}

TEST_CASE("missing owner check") {
    Pubkey program = pk(0x50), foreign_owner = pk(0x60);
    auto accts = accts4(program);
    SUBCASE("foreign vouch then lamports decrease signals") {
        auto o = fresh("moc");
        o.data_read(accts[0].pubkey, foreign_owner, program);
        o.fact(dvp(0, 1), accts);
        o.lamports_write(11, accts[1].pubkey, 100, 50, {});
        REQUIRE(o.signaled());
        CHECK(o.signal()->kind == ReportKind::MissingOwnerCheck);
        CHECK(o.signal()->pc == 11);
    }
    SUBCASE("lamports increase is fine, any data write is not") {
        auto o = fresh("moc");
        o.data_read(accts[0].pubkey, foreign_owner, program);
        o.fact(dvp(0, 1), accts);
        o.lamports_write(11, accts[1].pubkey, 50, 100, {});
        CHECK(!o.signaled());
        o.data_write(12, accts[1].pubkey, {});
        REQUIRE(o.signaled());
        CHECK(o.signal()->pc == 12);
    }
    SUBCASE("program-owned data never vouches") {
        auto o = fresh("moc");
        o.data_read(accts[0].pubkey, program, program);
        o.fact(dvp(0, 1), accts);
        o.lamports_write(11, accts[1].pubkey, 100, 50, {});
        CHECK(!o.signaled());
    }
    SUBCASE("the foreign account itself is not the victim") {
        auto o = fresh("moc");
        o.data_read(accts[0].pubkey, foreign_owner, program);
        o.fact(dvp(0, 1), accts);
        o.lamports_write(11, accts[0].pubkey, 100, 50, {});
        CHECK(!o.signaled());
    }
}

TEST_CASE("integer bug") {
    auto accts = accts4();
    LabelSet wrapped{TaintLabel::overflowed()};
    auto o = fresh("ib");
    o.lamports_write(3, accts[0].pubkey, 10, 99999, {});  // clean store
    CHECK(!o.signaled());
    o.data_write(4, accts[0].pubkey, wrapped);  // data stores never signal
    CHECK(!o.signaled());
    o.lamports_write(5, accts[0].pubkey, 10, 99999, wrapped);
    REQUIRE(o.signaled());
    CHECK(o.signal()->kind == ReportKind::IntegerBug);
    CHECK(o.signal()->pc == 5);
}

TEST_CASE("arbitrary cross-program invoke") {
    OracleConfig cfg = OracleConfig::from_csv("acpi");
    cfg.malicious_program = pk(0x66);
    CpiRequest req;
    req.target = cfg.malicious_program;

    auto o = fresh("", {}, cfg);
    o.cpi(21, req);
    REQUIRE(o.signaled());
    CHECK(o.signal()->kind == ReportKind::ArbitraryCpi);
    CHECK(o.signal()->pc == 21);
    CHECK(!o.signal()->escalation);

    auto o2 = fresh("", {}, cfg);
    CpiRequest esc = req;
    esc.signer_pdas = {pk(9)};
    o2.cpi(21, esc);
    REQUIRE(o2.signaled());
    CHECK(o2.signal()->escalation);

    auto o3 = fresh("", {}, cfg);
    CpiRequest other;
    other.target = pk(0x67);
    o3.cpi(21, other);
    CHECK(!o3.signaled());

    // no planted key configured: never fires, even on a zero target
    auto o4 = fresh("acpi");
    CpiRequest zero;
    o4.cpi(21, zero);
    CHECK(!o4.signaled());
}

TEST_CASE("missing key check") {
    Pubkey authority;
    for (int i = 0; i < 32; i++) authority[i] = uint8_t(0xA0 + i);
    OracleConfig cfg = OracleConfig::from_csv("mkc");
    cfg.mkc_function_pc = 42;
    cfg.mkc_authority = authority;
    auto accts = accts4();

    auto checked_cmp = [&](int acct, uint32_t chunk, uint64_t other_val) {
        TaintCompare c;
        c.lhs_labels = {TaintLabel::pubkey(acct, chunk)};
        c.rhs_val = other_val;
        return c;
    };

    SUBCASE("compared-against-authority account passes, others signal") {
        auto o = fresh("", {}, cfg);
        o.armed_key_compare(checked_cmp(0, 2, read_le64(authority.data() + 16)), accts);
        o.local_call(9, 42, accts[0].pubkey);
        CHECK(!o.signaled());
        o.local_call(9, 42, accts[1].pubkey);
        REQUIRE(o.signaled());
        CHECK(o.signal()->kind == ReportKind::MissingKeyCheck);
        CHECK(o.signal()->pc == 9);
    }
    SUBCASE("the orientation of the comparison does not matter") {
        auto o = fresh("", {}, cfg);
        TaintCompare c;
        c.rhs_labels = {TaintLabel::pubkey(0, 0)};
        c.lhs_val = read_le64(authority.data());
        o.armed_key_compare(c, accts);
        o.local_call(9, 42, accts[0].pubkey);
        CHECK(!o.signaled());
    }
    SUBCASE("comparing against the wrong value does not arm the account") {
        auto o = fresh("", {}, cfg);
        o.armed_key_compare(checked_cmp(0, 2, read_le64(authority.data() + 16) + 1), accts);
        o.local_call(9, 42, accts[0].pubkey);
        CHECK(o.signaled());
    }
    SUBCASE("chunk index must match the compared value's position") {
        auto o = fresh("", {}, cfg);
        o.armed_key_compare(checked_cmp(0, 1, read_le64(authority.data() + 16)), accts);
        o.local_call(9, 42, accts[0].pubkey);
        CHECK(o.signaled());
    }
    SUBCASE("other call targets and unresolvable arguments are ignored") {
        auto o = fresh("", {}, cfg);
        o.local_call(9, 41, accts[1].pubkey);
        o.local_call(9, 42, std::nullopt);
        CHECK(!o.signaled());
    }
    SUBCASE("unarmed configurations never fire") {
        OracleConfig unarmed = cfg;
        unarmed.mkc_authority = Pubkey{};
        auto o = fresh("", {}, unarmed);
        o.local_call(9, 42, accts[1].pubkey);
        CHECK(!o.signaled());

        auto o2 = fresh("msc");
        o2.local_call(9, 42, accts[1].pubkey);
        CHECK(!o2.signaled());
    }
}

TEST_CASE("lamports flow check") {
    LedgerConfig lcfg;
    Ledger ledger(lcfg, {0x95});
    const LedgerSnapshot& base = ledger.snapshot();
    const Pubkey user = lcfg.user_wallet, attacker = lcfg.attacker_wallet;

    auto drained = [&](const Pubkey& from, const Pubkey& to, uint64_t amount) {
        LedgerSnapshot w = base;
        w.find(from)->lamports -= amount;
        w.find(to)->lamports += amount;
        return w;
    };
    auto run = [&](std::vector<Pubkey> signers, const LedgerSnapshot& working) {
        Oracles o(OracleConfig::from_csv("lamports"));
        o.begin_execution(std::move(signers), base.roles);
        return o.check_lamports(base, working);
    };

    SUBCASE("attacker-signed drain of the user wallet signals") {
        auto sig = run({attacker}, drained(user, attacker, 1000));
        REQUIRE(sig.has_value());
        CHECK(sig->kind == ReportKind::LamportsTheft);
        CHECK(sig->pc == 0);
    }
    SUBCASE("gate: user consent or missing attacker signature suppresses") {
        auto w = drained(user, attacker, 1000);
        CHECK(!run({attacker, user}, w).has_value());
        CHECK(!run({user}, w).has_value());
        CHECK(!run({}, w).has_value());
    }
    SUBCASE("extra user data accounts are outside the protected set") {
        auto w = drained(ascii_key("user-data-0"), attacker, 1000);
        CHECK(!run({attacker}, w).has_value());
    }
    SUBCASE("attacker side must actually gain") {
        LedgerSnapshot w = base;
        w.find(user)->lamports -= 1000;  // burned, not stolen
        CHECK(!run({attacker}, w).has_value());
    }
    SUBCASE("user-related program accounts are protected") {
        LedgerSnapshot snap = base;
        SeedStructure s;
        s.id = 1;
        s.bump_searched = true;
        s.elements = {{false, RoleKind::None, Bytes{'v', 'a', 'u', 'l', 't'}}};
        generate_pdas(snap, {s}, lcfg);
        REQUIRE(snap.roles.user_pda_keys.size() == 1);
        Pubkey vault = snap.roles.user_pda_keys[0];

        LedgerSnapshot w = snap;
        w.find(vault)->lamports -= 500;
        w.find(attacker)->lamports += 500;
        Oracles o(OracleConfig::from_csv("lamports"));
        o.begin_execution({attacker}, snap.roles);
        auto sig = o.check_lamports(snap, w);
        REQUIRE(sig.has_value());
        CHECK(sig->kind == ReportKind::LamportsTheft);
    }
}

TEST_CASE("one signal per execution, reset on the next") {
    auto accts = accts4();
    LabelSet wrapped{TaintLabel::overflowed()};
    Oracles o(OracleConfig::from_csv("msc,ib"));
    o.begin_execution({}, basic_roles());
    o.fact(dvp(0, 1), accts);
    o.lamports_write(7, accts[0].pubkey, 5, 5, {});
    REQUIRE(o.signaled());
    CHECK(o.signal()->kind == ReportKind::MissingSignerCheck);
    o.lamports_write(8, accts[2].pubkey, 1, 2, wrapped);
    CHECK(o.signal()->kind == ReportKind::MissingSignerCheck);  // first one sticks
    CHECK(o.signal()->pc == 7);

    o.begin_execution({}, basic_roles());
    CHECK(!o.signaled());
    o.lamports_write(8, accts[2].pubkey, 1, 2, wrapped);
    REQUIRE(o.signaled());
    CHECK(o.signal()->kind == ReportKind::IntegerBug);
}

TEST_CASE("evaluation order when one write trips several oracles") {
    Pubkey program = pk(0x50), foreign_owner = pk(0x60);
    auto accts = accts4(program);
    LabelSet wrapped{TaintLabel::overflowed()};
    auto prime_and_write = [&](const char* csv) {
        Oracles o(OracleConfig::from_csv(csv));
        o.begin_execution({}, basic_roles());
        o.data_read(accts[0].pubkey, foreign_owner, program);
        o.fact(dvp(0, 1), accts);
        o.lamports_write(7, accts[1].pubkey, 100, 50, wrapped);
        REQUIRE(o.signaled());
        return o.signal()->kind;
    };
    CHECK(prime_and_write("msc,moc,ib") == ReportKind::MissingSignerCheck);
    CHECK(prime_and_write("moc,ib") == ReportKind::MissingOwnerCheck);
    CHECK(prime_and_write("ib") == ReportKind::IntegerBug);
}

// ---- end-to-end through the VM ----

namespace {

struct VmFixture {
    LedgerConfig cfg;
    LedgerSnapshot snap;
    Instruction instr;
    Bytes blob;
    InputLayoutMap layout;
    std::vector<OracleAccount> oracle_accounts;

    VmFixture() : snap(build_snapshot(cfg, {0x95})) {
        instr.program_id = cfg.target_program;
        instr.account_metas = {{ascii_key("user-data-0"), false, true},
                               {cfg.user_wallet, false, true},
                               {cfg.sysvar_clock, false, false}};
        instr.data = {1, 2, 3, 4};
        std::tie(blob, layout) = serialize(instr, snap);
        for (const auto& m : instr.account_metas) {
            const Account* a = snap.find(m.pubkey);
            oracle_accounts.push_back({a->pubkey, a->owner, m.is_writable});
        }
    }

    uint64_t data_addr(int a) const { return MM_INPUT_START + layout.accounts[a].data; }
    uint64_t pubkey_addr(int a) const { return MM_INPUT_START + layout.accounts[a].pubkey_off; }
    uint64_t lamports_addr(int a) const { return MM_INPUT_START + layout.accounts[a].lamports; }

    struct Result {
        ExecutionOutcome outcome;
        std::optional<OracleSignalInfo> signal;
    };

    Result run(const std::string& src, std::vector<Pubkey> signers,
               std::optional<OracleConfig> ocfg = std::nullopt) {
        auto assembled = assemble(src);
        auto prog = load_program(assembled.text, ProgramFormat::Flat, assembled.syscalls);
        TaintEngine taint(&layout);
        Oracles oracles(ocfg ? *ocfg : OracleConfig::from_csv("all"));
        oracles.begin_execution(std::move(signers), snap.roles);
        OracleVmAdapter adapter(&oracles, &taint, &layout, oracle_accounts, instr.program_id,
                                true);
        taint.compare_sink = [&](const TaintCompare& c) { adapter.compare(c); };
        NoCpiEnv env;
        ComputeMeter meter{DEFAULT_COMPUTE_BUDGET};
        Vm vm(prog, blob, &env, &meter);
        vm.add_hooks(&taint);
        vm.add_hooks(&adapter);
        return {vm.execute(), oracles.signal()};
    }
};

std::string fmt(const char* pattern, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, (unsigned long long)a, (unsigned long long)b,
                  (unsigned long long)c);
    return buf;
}

}  // namespace

TEST_CASE("signals halt a real execution after the triggering instruction") {
    VmFixture f;
    // Gate on stored-authority == wallet pubkey chunk, then pay out; no signer
    // check anywhere. pc of the store below the comparison is 10.
    std::string src = fmt(
        "lddw r2, 0x%llx\n"   // 0-1
        "ldxdw r3, [r2+0]\n"  // 2: account 0 data (tainted)
        "lddw r4, 0x%llx\n"   // 3-4
        "ldxdw r5, [r4+0]\n"  // 5: account 1 pubkey (tainted)
        "jeq r3, r5, +1\n"    // 6: the unsigned identity gate
        "ja +0\n"             // 7
        "lddw r2, 0x%llx\n"   // 8-9
        "stdw [r2+0], 7\n"    // 10: lamports write -> signal
        "mov64 r0, 0\n"         // 11
        "exit\n",             // 12
        f.data_addr(0), f.pubkey_addr(1), f.lamports_addr(0));

    SUBCASE("unsigned run signals and halts") {
        auto r = f.run(src, {f.cfg.attacker_wallet});
        CHECK(r.outcome.kind == OutcomeKind::OracleSignal);
        REQUIRE(r.signal.has_value());
        CHECK(r.signal->kind == ReportKind::MissingSignerCheck);
        CHECK(r.signal->pc == 10);
    }
    SUBCASE("the same program with the wallet signed runs clean") {
        auto r = f.run(src, {f.cfg.user_wallet});
        CHECK(r.outcome.kind == OutcomeKind::Success);
        CHECK(!r.signal.has_value());
    }
}

TEST_CASE("foreign-data vouch detected through the VM, sub-field lamports write") {
    VmFixture f;
    // Trust a value read from the clock sysvar (owned by another program) to
    // identify the payee, then decrement one mid byte of its lamports.
    std::string src = fmt(
        "lddw r2, 0x%llx\n"   // clock data
        "ldxdw r3, [r2+0]\n"
        "lddw r4, 0x%llx\n"   // wallet pubkey
        "ldxdw r5, [r4+0]\n"
        "jeq r3, r5, +1\n"
        "ja +0\n"
        "lddw r2, 0x%llx\n"   // wallet lamports, offset 3
        "stb [r2+3], 0\n"     // 10: 10 SOL has 0x40 there; 0 is a decrease
        "mov64 r0, 0\n"
        "exit\n",
        f.data_addr(2), f.pubkey_addr(1), f.lamports_addr(1));
    auto r = f.run(src, {f.cfg.user_wallet}, OracleConfig::from_csv("moc"));
    CHECK(r.outcome.kind == OutcomeKind::OracleSignal);
    REQUIRE(r.signal.has_value());
    CHECK(r.signal->kind == ReportKind::MissingOwnerCheck);
    CHECK(r.signal->pc == 10);
}

TEST_CASE("overflowed arithmetic reaching lamports detected through the VM") {
    VmFixture f;
    std::string src = fmt(
        "lddw r3, 0xffffffffffffffff\n"  // 0-1
        "add64 r3, 2\n"                    // 2: wraps
        "lddw r2, 0x%llx\n"              // 3-4
        "stxdw [r2+0], r3\n"             // 5: overflowed value into lamports
        "mov64 r0, 0\n"
        "exit\n",
        f.lamports_addr(0));
    auto r = f.run(src, {}, OracleConfig::from_csv("ib"));
    CHECK(r.outcome.kind == OutcomeKind::OracleSignal);
    REQUIRE(r.signal.has_value());
    CHECK(r.signal->kind == ReportKind::IntegerBug);
    CHECK(r.signal->pc == 5);

    // the same value stored into account data is not a finding
    std::string benign = fmt(
        "lddw r3, 0xffffffffffffffff\n"
        "add64 r3, 2\n"
        "lddw r2, 0x%llx\n"
        "stxdw [r2+0], r3\n"
        "mov64 r0, 0\n"
        "exit\n",
        f.data_addr(0));
    auto r2 = f.run(benign, {}, OracleConfig::from_csv("ib"));
    CHECK(r2.outcome.kind == OutcomeKind::Success);
    CHECK(!r2.signal.has_value());
}
