// Semantics registry plumbing. The runtime observation hooks that feed it
// live in the pipeline; this file owns naming and accumulation.
#include "solfuzz/extractors.hpp"

#include <algorithm>

namespace solfuzz {

const char* role_kind_name(RoleKind r) {
    switch (r) {
        case RoleKind::None: return "none";
        case RoleKind::User: return "user";
        case RoleKind::Attacker: return "attacker";
        case RoleKind::Sysvar: return "sysvar";
        case RoleKind::Program: return "program";
        case RoleKind::UserPda: return "user_pda";
        case RoleKind::AttackerPda: return "attacker_pda";
        case RoleKind::AttackerControlled: return "attacker_controlled";
    }
    return "none";
}

RoleKind role_kind_from_name(const std::string& s) {
    if (s == "user") return RoleKind::User;
    if (s == "attacker") return RoleKind::Attacker;
    if (s == "sysvar") return RoleKind::Sysvar;
    if (s == "program") return RoleKind::Program;
    if (s == "user_pda") return RoleKind::UserPda;
    if (s == "attacker_pda") return RoleKind::AttackerPda;
    if (s == "attacker_controlled") return RoleKind::AttackerControlled;
    return RoleKind::None;
}

bool SemanticsRegistry::absorb(const std::vector<SeedStructure>& s,
                               const std::vector<AccountDataLayout>& l) {
    bool changed = false;
    for (const SeedStructure& st : s) {
        auto it = std::find_if(structures.begin(), structures.end(),
                               [&](const SeedStructure& e) { return e.id == st.id; });
        if (it == structures.end()) {
            structures.push_back(st);
            changed = true;
        }
    }
    for (const AccountDataLayout& ly : l) {
        auto it = std::find_if(layouts.begin(), layouts.end(),
                               [&](const AccountDataLayout& e) { return e.id == ly.id; });
        if (it == layouts.end()) {
            layouts.push_back(ly);
            changed = true;
        }
    }
    return changed;
}

}  // namespace solfuzz
