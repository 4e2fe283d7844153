#include "solfuzz/sha256.hpp"

#include <openssl/evp.h>

namespace solfuzz {

std::array<uint8_t, 32> sha256(const uint8_t* data, size_t len) {
    std::array<uint8_t, 32> out{};
    unsigned int n = 0;
    EVP_Digest(data, len, out.data(), &n, EVP_sha256(), nullptr);
    return out;
}

std::array<uint8_t, 32> sha256_concat(const std::vector<Bytes>& parts) {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    for (const auto& p : parts) EVP_DigestUpdate(ctx, p.data(), p.size());
    std::array<uint8_t, 32> out{};
    unsigned int n = 0;
    EVP_DigestFinal_ex(ctx, out.data(), &n);
    EVP_MD_CTX_free(ctx);
    return out;
}

}  // namespace solfuzz
