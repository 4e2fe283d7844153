#include "solfuzz/base58.hpp"

namespace solfuzz {

std::string to_hex(const uint8_t* data, size_t len) {
    static const char* d = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (size_t i = 0; i < len; i++) {
        out += d[data[i] >> 4];
        out += d[data[i] & 0xf];
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(const std::string& hex) {
    if (hex.size() % 2) throw ConfigError("odd-length hex string");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); i++) {
        int hi = hex_nibble(hex[2 * i]), lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ConfigError("bad hex digit");
        out[i] = uint8_t(hi << 4 | lo);
    }
    return out;
}

static const char* kAlphabet = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

std::string base58_encode(const uint8_t* data, size_t len) {
    size_t zeros = 0;
    while (zeros < len && data[zeros] == 0) zeros++;

    // big-number base conversion, digits little-endian
    std::vector<uint8_t> digits;
    digits.reserve(len * 138 / 100 + 1);
    for (size_t i = zeros; i < len; i++) {
        uint32_t carry = data[i];
        for (auto& d : digits) {
            carry += uint32_t(d) << 8;
            d = carry % 58;
            carry /= 58;
        }
        while (carry) {
            digits.push_back(carry % 58);
            carry /= 58;
        }
    }
    std::string out(zeros, '1');
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) out += kAlphabet[*it];
    return out;
}

std::optional<Bytes> base58_decode(const std::string& s) {
    static int8_t rev[128];
    static bool init = false;
    if (!init) {
        for (auto& r : rev) r = -1;
        for (int i = 0; i < 58; i++) rev[int(kAlphabet[i])] = int8_t(i);
        init = true;
    }
    size_t zeros = 0;
    while (zeros < s.size() && s[zeros] == '1') zeros++;

    std::vector<uint8_t> bytes;  // little-endian
    for (size_t i = zeros; i < s.size(); i++) {
        unsigned char c = s[i];
        if (c >= 128 || rev[c] < 0) return std::nullopt;
        uint32_t carry = uint32_t(rev[c]);
        for (auto& b : bytes) {
            carry += uint32_t(b) * 58;
            b = carry & 0xff;
            carry >>= 8;
        }
        while (carry) {
            bytes.push_back(carry & 0xff);
            carry >>= 8;
        }
    }
    Bytes out(zeros, 0);
    for (auto it = bytes.rbegin(); it != bytes.rend(); ++it) out.push_back(*it);
    return out;
}

std::optional<Pubkey> base58_decode_pubkey(const std::string& s) {
    auto b = base58_decode(s);
    if (!b || b->size() != 32) return std::nullopt;
    Pubkey k;
    std::copy(b->begin(), b->end(), k.begin());
    return k;
}

}  // namespace solfuzz
