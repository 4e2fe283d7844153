#pragma once

#include <optional>

#include "solfuzz/common.hpp"

namespace solfuzz {

std::string base58_encode(const uint8_t* data, size_t len);
inline std::string base58_encode(const Pubkey& k) { return base58_encode(k.data(), k.size()); }
inline std::string base58_encode(const Bytes& b) { return base58_encode(b.data(), b.size()); }

std::optional<Bytes> base58_decode(const std::string& s);
// Decodes a string that must be exactly one 32-byte key.
std::optional<Pubkey> base58_decode_pubkey(const std::string& s);

}  // namespace solfuzz
