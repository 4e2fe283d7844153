#pragma once

#include "solfuzz/common.hpp"

namespace solfuzz {

std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len);
inline std::array<uint8_t, 32> sha256(const Bytes& b) { return sha256(b.data(), b.size()); }
std::array<uint8_t, 32> sha256_concat(const std::vector<Bytes>& parts);

}  // namespace solfuzz
