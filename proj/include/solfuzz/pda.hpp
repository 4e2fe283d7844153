// Program-derived addresses: sha256(seed bytes ‖ program id ‖ marker), with a
// surrogate curve predicate (first digest byte of sha256(key) < 128 = "on
// curve") and the standard 255→0 bump search.
#pragma once

#include <optional>

#include "solfuzz/common.hpp"

namespace solfuzz {

constexpr size_t PDA_MAX_SEEDS = 16;
constexpr size_t PDA_MAX_SEED_LEN = 32;

Pubkey pda_derive(const std::vector<Bytes>& seeds, const Pubkey& program_id);
bool pda_on_curve(const Pubkey& key);
// nullopt when the derived key lands on the surrogate curve
std::optional<Pubkey> pda_create(const std::vector<Bytes>& seeds, const Pubkey& program_id);
// Appends bump 255..0 as a one-byte seed; first off-curve result wins.
std::optional<std::pair<Pubkey, uint8_t>> pda_try_find(const std::vector<Bytes>& seeds,
                                                       const Pubkey& program_id);

}  // namespace solfuzz
