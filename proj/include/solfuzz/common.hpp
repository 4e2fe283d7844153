// Shared basic types: pubkeys, byte buffers, hex, little-endian access.
#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace solfuzz {

using Bytes = std::vector<uint8_t>;
using Pubkey = std::array<uint8_t, 32>;

// Thrown for unloadable programs, bad assembly, bad configs and malformed
// external files. Runtime behavior of a loaded program never throws; it is
// reported through ExecutionOutcome instead.
struct LoadError : std::runtime_error {
    explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};
struct AsmError : std::runtime_error {
    explicit AsmError(const std::string& what) : std::runtime_error(what) {}
};
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline uint64_t read_le64(const uint8_t* p) {
    uint64_t v;
    std::memcpy(&v, p, 8);
    return v;  // little-endian hosts only, same as the wire format
}
inline uint32_t read_le32(const uint8_t* p) {
    uint32_t v;
    std::memcpy(&v, p, 4);
    return v;
}
inline uint16_t read_le16(const uint8_t* p) {
    uint16_t v;
    std::memcpy(&v, p, 2);
    return v;
}
inline void write_le64(uint8_t* p, uint64_t v) { std::memcpy(p, &v, 8); }
inline void write_le32(uint8_t* p, uint32_t v) { std::memcpy(p, &v, 4); }
inline void write_le16(uint8_t* p, uint16_t v) { std::memcpy(p, &v, 2); }

inline void append_le64(Bytes& out, uint64_t v) {
    size_t n = out.size();
    out.resize(n + 8);
    write_le64(out.data() + n, v);
}

inline Pubkey pubkey_from_bytes(const Bytes& b) {
    Pubkey k{};
    std::memcpy(k.data(), b.data(), b.size() < 32 ? b.size() : 32);
    return k;
}

std::string to_hex(const uint8_t* data, size_t len);
inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }
inline std::string to_hex(const Pubkey& k) { return to_hex(k.data(), k.size()); }
Bytes from_hex(const std::string& hex);

// FNV-1a; used for stable ids (seed structures, data layouts, PDA labels).
inline uint64_t fnv1a64(const uint8_t* data, size_t len, uint64_t h = 0xcbf29ce484222325ull) {
    for (size_t i = 0; i < len; i++) {
        h ^= data[i];
        h *= 0x100000001b3ull;
    }
    return h;
}
inline uint64_t fnv1a64_u64(uint64_t v, uint64_t h = 0xcbf29ce484222325ull) {
    uint8_t buf[8];
    write_le64(buf, v);
    return fnv1a64(buf, 8, h);
}

}  // namespace solfuzz
