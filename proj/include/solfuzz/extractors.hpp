// Recovered program semantics: PDA seed structures and pubkey positions
// inside account data. The runtime extraction hooks live in the pipeline;
// this header owns the data types and the accumulating registry that feeds
// snapshot regeneration.
#pragma once

#include <cstdint>
#include <vector>

#include "solfuzz/common.hpp"

namespace solfuzz {

enum class RoleKind {
    None,
    User,
    Attacker,
    Sysvar,
    Program,
    UserPda,
    AttackerPda,
    AttackerControlled,
};
const char* role_kind_name(RoleKind r);
RoleKind role_kind_from_name(const std::string& s);

struct SeedElement {
    bool from_pubkey = false;  // false: static bytes baked into the program
    RoleKind role = RoleKind::None;  // source account role when from_pubkey
    Bytes bytes;                     // observed seed bytes (kept for statics)

    bool operator==(const SeedElement&) const = default;
};

struct SeedStructure {
    uint64_t id = 0;  // fnv(call pc, seed count): replay-stable identity
    std::vector<SeedElement> elements;
    bool bump_searched = false;  // try_find (searched) vs create (fixed)

    bool operator==(const SeedStructure&) const = default;
};

struct AccountDataLayout {
    uint64_t id = 0;       // fnv over sorted writing pcs and the data length
    uint64_t data_len = 0;
    std::vector<uint32_t> pubkey_offsets;  // sorted, non-overlapping

    bool operator==(const AccountDataLayout&) const = default;
};

// Monotone registry: entries accumulate, dedup by id, never mutate.
struct SemanticsRegistry {
    std::vector<SeedStructure> structures;
    std::vector<AccountDataLayout> layouts;

    // Returns true when anything new was admitted.
    bool absorb(const std::vector<SeedStructure>& s, const std::vector<AccountDataLayout>& l);
};

}  // namespace solfuzz
