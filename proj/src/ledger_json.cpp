// Snapshot + semantics registry as a JSON document. Replay requires
// bit-exactness, so everything binary goes through base58 (keys) or hex.
#include "json.hpp"
#include "solfuzz/base58.hpp"
#include "solfuzz/ledger.hpp"

namespace solfuzz {

using nlohmann::json;

namespace {

json keys_json(const std::vector<Pubkey>& keys) {
    json arr = json::array();
    for (const Pubkey& k : keys) arr.push_back(base58_encode(k));
    return arr;
}

std::vector<Pubkey> keys_from(const json& arr) {
    std::vector<Pubkey> out;
    for (const auto& s : arr) {
        auto k = base58_decode_pubkey(s.get<std::string>());
        if (!k) throw ConfigError("snapshot json: bad pubkey " + s.get<std::string>());
        out.push_back(*k);
    }
    return out;
}

Pubkey key_from(const json& s) {
    auto k = base58_decode_pubkey(s.get<std::string>());
    if (!k) throw ConfigError("snapshot json: bad pubkey " + s.get<std::string>());
    return *k;
}

}  // namespace

std::string snapshot_to_json(const LedgerSnapshot& snap, const SemanticsRegistry& semantics) {
    json j;
    j["generation"] = snap.generation;
    j["blockhash"] = to_hex(snap.blockhash);

    json accounts = json::object();
    for (const auto& [key, a] : snap.accounts) {
        accounts[base58_encode(key)] = {
            {"owner", base58_encode(a.owner)}, {"executable", a.executable},
            {"rent_epoch", a.rent_epoch},      {"lamports", a.lamports},
            {"data", to_hex(a.data)},
        };
    }
    j["accounts"] = std::move(accounts);

    j["roles"] = {
        {"user_keys", keys_json(snap.roles.user_keys)},
        {"attacker_keys", keys_json(snap.roles.attacker_keys)},
        {"sysvar_keys", keys_json(snap.roles.sysvar_keys)},
        {"program_keys", keys_json(snap.roles.program_keys)},
        {"user_pda_keys", keys_json(snap.roles.user_pda_keys)},
        {"attacker_pda_keys", keys_json(snap.roles.attacker_pda_keys)},
        {"attacker_controlled_keys", keys_json(snap.roles.attacker_controlled_keys)},
    };

    json structures = json::array();
    for (const SeedStructure& st : semantics.structures) {
        json elements = json::array();
        for (const SeedElement& e : st.elements) {
            if (e.from_pubkey)
                elements.push_back({{"kind", "pubkey"}, {"role", role_kind_name(e.role)}});
            else
                elements.push_back({{"kind", "static"}, {"bytes", to_hex(e.bytes)}});
        }
        structures.push_back({{"id", st.id},
                              {"bump_searched", st.bump_searched},
                              {"elements", std::move(elements)}});
    }
    json layouts = json::array();
    for (const AccountDataLayout& ly : semantics.layouts)
        layouts.push_back(
            {{"id", ly.id}, {"data_len", ly.data_len}, {"pubkey_offsets", ly.pubkey_offsets}});
    j["semantics"] = {{"seed_structures", std::move(structures)},
                      {"data_layouts", std::move(layouts)}};
    return j.dump(2);
}

std::pair<LedgerSnapshot, SemanticsRegistry> snapshot_from_json(const std::string& text) {
    json j = json::parse(text);
    LedgerSnapshot snap;
    SemanticsRegistry semantics;

    snap.generation = j.at("generation").get<uint64_t>();
    snap.blockhash = pubkey_from_bytes(from_hex(j.at("blockhash").get<std::string>()));

    for (const auto& [b58, body] : j.at("accounts").items()) {
        Account a;
        a.pubkey = key_from(b58);
        a.owner = key_from(body.at("owner"));
        a.executable = body.at("executable").get<bool>();
        a.rent_epoch = body.at("rent_epoch").get<uint64_t>();
        a.lamports = body.at("lamports").get<uint64_t>();
        a.data = from_hex(body.at("data").get<std::string>());
        snap.accounts[a.pubkey] = std::move(a);
    }

    const json& roles = j.at("roles");
    snap.roles.user_keys = keys_from(roles.at("user_keys"));
    snap.roles.attacker_keys = keys_from(roles.at("attacker_keys"));
    snap.roles.sysvar_keys = keys_from(roles.at("sysvar_keys"));
    snap.roles.program_keys = keys_from(roles.at("program_keys"));
    snap.roles.user_pda_keys = keys_from(roles.at("user_pda_keys"));
    snap.roles.attacker_pda_keys = keys_from(roles.at("attacker_pda_keys"));
    snap.roles.attacker_controlled_keys = keys_from(roles.at("attacker_controlled_keys"));

    const json& sem = j.at("semantics");
    for (const auto& sj : sem.at("seed_structures")) {
        SeedStructure st;
        st.id = sj.at("id").get<uint64_t>();
        st.bump_searched = sj.at("bump_searched").get<bool>();
        for (const auto& ej : sj.at("elements")) {
            SeedElement e;
            if (ej.at("kind") == "pubkey") {
                e.from_pubkey = true;
                e.role = role_kind_from_name(ej.at("role").get<std::string>());
            } else {
                e.bytes = from_hex(ej.at("bytes").get<std::string>());
            }
            st.elements.push_back(std::move(e));
        }
        semantics.structures.push_back(std::move(st));
    }
    for (const auto& lj : sem.at("data_layouts")) {
        AccountDataLayout ly;
        ly.id = lj.at("id").get<uint64_t>();
        ly.data_len = lj.at("data_len").get<uint64_t>();
        ly.pubkey_offsets = lj.at("pubkey_offsets").get<std::vector<uint32_t>>();
        semantics.layouts.push_back(std::move(ly));
    }
    return {std::move(snap), std::move(semantics)};
}

}  // namespace solfuzz
