#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "solfuzz/assembler.hpp"
#include "asm_fixtures.hpp"
#include "solfuzz/campaign.hpp"

using namespace solfuzz;

namespace {

Campaign make_campaign(const std::string& src, CampaignConfig cfg) {
    return Campaign(Ledger(LedgerConfig{}, assemble(src).text), std::move(cfg));
}

}  // namespace

TEST_CASE("mutations are deterministic and bounded") {
    Bytes parent{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::mt19937_64 a(99), b(99), c(100);
    bool diverged = false;
    for (int i = 0; i < 2000; i++) {
        Bytes x = mutate_once(parent, a);
        CHECK(x == mutate_once(parent, b));
        if (x != mutate_once(parent, c)) diverged = true;
        CHECK(x.size() >= 1);
        CHECK(x.size() <= MAX_TX_WIRE);
        parent = x;  // walk a chain so sizes drift
    }
    CHECK(diverged);

    std::mt19937_64 r(7);
    CHECK(mutate_once({}, r).size() == 1);
    Bytes big(MAX_TX_WIRE, 0xab);
    for (int i = 0; i < 500; i++) CHECK(mutate_once(big, r).size() <= MAX_TX_WIRE);
}

TEST_CASE("crossover splices within bounds") {
    std::mt19937_64 r(5);
    Bytes a(100, 0x11), b(200, 0x22);
    for (int i = 0; i < 500; i++) {
        Bytes x = crossover(a, b, r);
        CHECK(x.size() >= 1);
        CHECK(x.size() <= MAX_TX_WIRE);
        CHECK(x[0] == 0x11);  // always keeps a non-empty prefix of a
    }
    CHECK(crossover({}, b, r) == b);
    CHECK(crossover(a, {}, r) == a);
    Bytes big(MAX_TX_WIRE, 1);
    for (int i = 0; i < 100; i++) CHECK(crossover(big, big, r).size() <= MAX_TX_WIRE);
}

TEST_CASE("campaign finds an unchecked debit and halts on it") {
    CampaignConfig cfg;
    cfg.seed = 3;
    cfg.max_execs = 50000;
    cfg.oracles = OracleConfig::from_csv("ib");
    cfg.halt_kinds = {ReportKind::IntegerBug};
    Campaign camp = make_campaign(fixtures::debit_program(false), cfg);
    camp.run();

    REQUIRE(camp.reports().size() == 1);
    const Report& rep = camp.reports()[0];
    CHECK(rep.kind == ReportKind::IntegerBug);
    CHECK(camp.stats().executions < cfg.max_execs);  // halted early
    CHECK(camp.stats().signals >= 1);

    SUBCASE("the report replays to the same finding") {
        ExecutionResult replayed = replay_report(rep);
        CHECK(replay_matches(rep, replayed));
        CHECK(replayed.signal->pc == rep.pc);
    }
    SUBCASE("report files round-trip through json") {
        Report back = report_from_json(report_to_json(rep));
        CHECK(back.kind == rep.kind);
        CHECK(back.pc == rep.pc);
        CHECK(back.detail == rep.detail);
        CHECK(back.escalation == rep.escalation);
        CHECK(back.exec_index == rep.exec_index);
        CHECK(back.tx_wire == rep.tx_wire);
        CHECK(back.program == rep.program);
        CHECK(back.snapshot_json == rep.snapshot_json);
        CHECK(report_to_json(back) == report_to_json(rep));

        auto dir = std::filesystem::temp_directory_path() / "solfuzz-report-test";
        std::filesystem::remove_all(dir);
        std::string path = write_report_file(rep, dir.string());
        CHECK(std::filesystem::path(path).filename().string() ==
              "report_integer_bug_" + std::to_string(rep.pc) + ".json");
        std::ifstream in(path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(replay_matches(rep, replay_report(report_from_json(text))));
        std::filesystem::remove_all(dir);
    }
}

TEST_CASE("identical campaigns produce identical outcomes") {
    auto run_one = [&](const std::string& src, const char* oracle_csv) {
        CampaignConfig cfg;
        cfg.seed = 42;
        cfg.max_execs = 1500;
        cfg.oracles = OracleConfig::from_csv(oracle_csv);
        Campaign camp = make_campaign(src, cfg);
        camp.run();
        std::string reports;
        for (const Report& r : camp.reports()) reports += report_to_json(r) + "\n";
        return std::tuple(camp.stats(), reports, camp.coverage().seen_count());
    };

    SUBCASE("clean program, full budget") {
        auto [s1, r1, e1] = run_one(fixtures::debit_program(true), "ib");
        auto [s2, r2, e2] = run_one(fixtures::debit_program(true), "ib");
        CHECK(s1.executions == 1500);
        CHECK(s2.executions == 1500);
        CHECK(s1.successes == s2.successes);
        CHECK(s1.program_errors == s2.program_errors);
        CHECK(s1.aborts == s2.aborts);
        CHECK(s1.corpus_size == s2.corpus_size);
        CHECK(s1.edges_seen == s2.edges_seen);
        CHECK(r1 == r2);
        CHECK(r1.empty());  // the checked debit never wraps
        CHECK(e1 == e2);
        CHECK(s1.successes > 0);        // the happy path is reachable
        CHECK(s1.program_errors > 0);   // and so is the guard

        // a different seed explores a different path through input space
        CampaignConfig other;
        other.seed = 43;
        other.max_execs = 1500;
        other.oracles = OracleConfig::from_csv("ib");
        Campaign camp = make_campaign(fixtures::debit_program(true), other);
        camp.run();
        CHECK(camp.stats().successes != s1.successes);
    }
    SUBCASE("vulnerable program, byte-identical reports") {
        auto [s1, r1, e1] = run_one(fixtures::debit_program(false), "ib");
        auto [s2, r2, e2] = run_one(fixtures::debit_program(false), "ib");
        CHECK(r1 == r2);
        CHECK(!r1.empty());
        CHECK(e1 == e2);
        CHECK(s1.signals == s2.signals);
    }
}

TEST_CASE("observed derivations grow the ledger mid-campaign") {
    // Derives a key from ["v", account0 pubkey] every execution.
    std::string src = std::string(fixtures::kWalkPrologue) +
                      "    ldxdw r6, [r10-128]\n"
                      "    mov64 r7, r6\n"
                      "    add64 r7, 8\n"     // pubkey field of account 0
                      "    ldxdw r8, [r3+0]\n"
                      "    mov64 r9, r3\n"
                      "    add64 r9, 8\n"
                      "    add64 r9, r8\n"    // program id follows the data
                      "    stb [r10-136], 118\n"
                      "    mov64 r1, r10\n"
                      "    add64 r1, -136\n"
                      "    stxdw [r10-168], r1\n"
                      "    stdw [r10-160], 1\n"
                      "    stxdw [r10-152], r7\n"
                      "    stdw [r10-144], 32\n"
                      "    mov64 r1, r10\n"
                      "    add64 r1, -168\n"
                      "    mov64 r2, 2\n"
                      "    mov64 r3, r9\n"
                      "    mov64 r4, r10\n"
                      "    add64 r4, -200\n"
                      "    mov64 r5, r10\n"
                      "    add64 r5, -208\n"
                      "    call sol_try_find_program_address\n"
                      "    mov64 r0, 0\n"
                      "    exit\n";
    CampaignConfig cfg;
    cfg.seed = 1;
    cfg.max_execs = 50;
    Campaign camp = make_campaign(src, cfg);
    camp.run();
    CHECK(camp.stats().semantics_growths >= 1);
    CHECK(!camp.ledger().snapshot().roles.user_pda_keys.empty());
    CHECK(!camp.ledger().snapshot().roles.attacker_pda_keys.empty());
    CHECK(camp.ledger().semantics().structures.size() >= 1);
}
