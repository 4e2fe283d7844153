#include "solfuzz/mutate.hpp"

#include <algorithm>
#include <iterator>

#include "solfuzz/ledger.hpp"

namespace solfuzz {

namespace {

constexpr uint16_t kInteresting16[] = {0, 1, 16, 255, 256, 1024, 0x7fff, 0xffff};
constexpr uint64_t kInteresting64[] = {0,
                                       1,
                                       255,
                                       256,
                                       1024,
                                       0x7fffffffull,
                                       0xffffffffull,
                                       0x7fffffffffffffffull,
                                       0xffffffffffffffffull,
                                       10 * LAMPORTS_PER_SOL};

size_t pick(std::mt19937_64& rng, size_t bound) { return size_t(rng() % bound); }

}  // namespace

Bytes mutate_once(const Bytes& parent, std::mt19937_64& rng) {
    Bytes out = parent;
    if (out.empty()) return {uint8_t(rng())};

    switch (rng() % 6) {
        case 0: {  // bit flip
            size_t off = pick(rng, out.size());
            out[off] ^= uint8_t(1u << (rng() % 8));
            break;
        }
        case 1: {  // byte set
            out[pick(rng, out.size())] = uint8_t(rng());
            break;
        }
        case 2: {  // 16-bit interesting splice
            if (out.size() < 2) {
                out[0] = uint8_t(rng());
                break;
            }
            size_t off = pick(rng, out.size() - 1);
            write_le16(&out[off], kInteresting16[rng() % std::size(kInteresting16)]);
            break;
        }
        case 3: {  // 64-bit interesting splice
            if (out.size() < 8) {
                out[pick(rng, out.size())] = uint8_t(rng());
                break;
            }
            size_t off = pick(rng, out.size() - 7);
            write_le64(&out[off], kInteresting64[rng() % std::size(kInteresting64)]);
            break;
        }
        case 4: {  // block duplication
            size_t src = pick(rng, out.size());
            size_t n = 1 + pick(rng, std::min<size_t>(out.size() - src, 64));
            size_t dst = pick(rng, out.size() + 1);
            Bytes block(out.begin() + src, out.begin() + src + n);
            out.insert(out.begin() + dst, block.begin(), block.end());
            if (out.size() > MAX_TX_WIRE) out.resize(MAX_TX_WIRE);
            break;
        }
        case 5: {  // block deletion
            if (out.size() < 2) {
                out[0] = uint8_t(rng());
                break;
            }
            size_t off = pick(rng, out.size() - 1);
            size_t n = 1 + pick(rng, std::min<size_t>(out.size() - off - 1, 64) + 1);
            n = std::min(n, out.size() - 1);  // keep at least one byte
            out.erase(out.begin() + off, out.begin() + std::min(out.size(), off + n));
            break;
        }
    }
    if (out.empty()) out.push_back(uint8_t(rng()));
    return out;
}

Bytes crossover(const Bytes& a, const Bytes& b, std::mt19937_64& rng) {
    if (a.empty()) return b.empty() ? Bytes{uint8_t(rng())} : b;
    if (b.empty()) return a;
    size_t cut_a = 1 + pick(rng, a.size());
    size_t cut_b = pick(rng, b.size() + 1);
    Bytes out(a.begin(), a.begin() + cut_a);
    out.insert(out.end(), b.begin() + cut_b, b.end());
    if (out.size() > MAX_TX_WIRE) out.resize(MAX_TX_WIRE);
    if (out.empty()) out.push_back(uint8_t(rng()));
    return out;
}

}  // namespace solfuzz
