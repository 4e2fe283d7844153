#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "asm_fixtures.hpp"
#include "doctest.h"
#include "solfuzz/assembler.hpp"
#include "solfuzz/campaign.hpp"
#include "solfuzz/cfg.hpp"

using namespace solfuzz;

namespace {

EbpfProgram prog(const std::string& src) {
    auto a = assemble(src);
    return load_program(a.text, ProgramFormat::Flat, a.syscalls);
}

}  // namespace

TEST_CASE("edge counts on elementary shapes") {
    SUBCASE("straight line: one completion edge") {
        auto p = prog("mov64 r0, 0\nexit\n");
        CHECK(cfg_edge_estimate(p) == 1);
        CHECK(cfg_edge_bruteforce(p) == 1);
    }
    SUBCASE("conditional branch: two edges plus completion") {
        auto p = prog("jeq r1, 0, +1\nmov64 r0, 0\nexit\n");
        CHECK(cfg_edge_estimate(p) == 3);
        CHECK(cfg_edge_bruteforce(p) == 3);
    }
    SUBCASE("unconditional jump: one edge") {
        auto p = prog("ja +1\nmov64 r0, 0\nexit\n");
        CHECK(cfg_edge_estimate(p) == 2);
        CHECK(cfg_edge_bruteforce(p) == 2);
    }
    SUBCASE("lddw occupies two slots but counts once") {
        auto p = prog("lddw r1, 0x123456789abc\nmov64 r0, 0\nexit\n");
        CHECK(cfg_edge_estimate(p) == 1);
        CHECK(cfg_edge_bruteforce(p) == 1);
    }
    SUBCASE("syscall: one fall-through edge") {
        auto p = prog("mov64 r1, 0\nmov64 r2, 0\ncall sol_log\nmov64 r0, 0\nexit\n");
        CHECK(cfg_edge_estimate(p) == 2);
        CHECK(cfg_edge_bruteforce(p) == 2);
    }
}

TEST_CASE("helper functions and the single-call-site discipline") {
    SUBCASE("one call site: estimate is exact") {
        auto p = prog(
            "call helper\n"
            "mov64 r0, 0\n"
            "exit\n"
            "helper:\n"
            "mov64 r1, 1\n"
            "exit\n");
        CHECK(cfg_edge_estimate(p) == 3);  // call, entry exit, helper exit
        CHECK(cfg_edge_bruteforce(p) == 3);
    }
    SUBCASE("two call sites: the helper's exit fans out") {
        auto p = prog(
            "call helper\n"
            "call helper\n"
            "mov64 r0, 0\n"
            "exit\n"
            "helper:\n"
            "mov64 r1, 1\n"
            "exit\n");
        CHECK(cfg_edge_estimate(p) == 4);
        CHECK(cfg_edge_bruteforce(p) == 5);  // helper exit returns to both sites
    }
    SUBCASE("branch onto its own fall-through collapses") {
        auto p = prog("jeq r1, 0, +0\nmov64 r0, 0\nexit\n");
        CHECK(cfg_edge_estimate(p) == 3);
        CHECK(cfg_edge_bruteforce(p) == 2);  // taken == not taken
    }
}

TEST_CASE("the bundled program idiom keeps the estimate exact") {
    auto vulnerable = prog(fixtures::debit_program(false));
    CHECK(cfg_edge_estimate(vulnerable) == cfg_edge_bruteforce(vulnerable));
    auto patched = prog(fixtures::debit_program(true));
    CHECK(cfg_edge_estimate(patched) == cfg_edge_bruteforce(patched));
}

TEST_CASE("runtime coverage never exceeds the static estimate") {
    CampaignConfig cfg;
    cfg.seed = 11;
    cfg.max_execs = 3000;
    cfg.oracles = OracleConfig::from_csv("ib");
    Campaign camp(Ledger(LedgerConfig{}, assemble(fixtures::debit_program(true)).text), cfg);
    camp.run();
    uint64_t covered = camp.coverage().seen_count();
    uint64_t estimate = cfg_edge_estimate(prog(fixtures::debit_program(true)));
    CHECK(covered > 0);
    CHECK(covered <= estimate);
}
